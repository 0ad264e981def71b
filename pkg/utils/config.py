"""Configuration management for the prodcert toolkit."""

import os
from typing import Dict, Any, Optional, Union
from dataclasses import dataclass, field
from pathlib import Path
import yaml
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
REPORT_FORMATS = ("text", "structured")


@dataclass
class PrecisionConfig:
    """Working precision policy, in bits."""
    start_bits: int = 64
    cap_bits: int = 65536  # overridden by PRODCERT_PRECISION_CAP
    min_bits: int = 16


@dataclass
class AlgebraConfig:
    """Exact algebraic arithmetic limits."""
    degree_cap: int = 24


@dataclass
class CriteriaConfig:
    """Hypothesis checker defaults."""
    prefix: int = 20
    # integers above this many bits are only handled as Balls / power forms
    exact_bits_limit: int = 1 << 16


@dataclass
class EvaluatorConfig:
    """Infinite product evaluation policy."""
    target_radius: str = "1e-30"
    max_terms: int = 200
    stall_limit: int = 2


@dataclass
class LemmaConfig:
    """Lemma harness and diagnostic defaults."""
    decrease_factor: int = 1000
    lookahead: int = 4
    jump_k: Optional[int] = None


@dataclass
class ReportConfig:
    """Report emission."""
    format: str = "text"
    digits: int = 20
    schema_version: int = 1


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "WARNING"


@dataclass
class Config:
    """Main configuration class."""
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    algebra: AlgebraConfig = field(default_factory=AlgebraConfig)
    criteria: CriteriaConfig = field(default_factory=CriteriaConfig)
    evaluator: EvaluatorConfig = field(default_factory=EvaluatorConfig)
    lemmalab: LemmaConfig = field(default_factory=LemmaConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    def __post_init__(self):
        """Post-initialization to handle environment variables and validation."""
        cap = os.environ.get("PRODCERT_PRECISION_CAP", "").strip()
        if cap:
            try:
                self.precision.cap_bits = int(cap)
            except ValueError:
                raise ValueError(f"PRODCERT_PRECISION_CAP must be an integer, got: {cap}")

        level = os.environ.get("PRODCERT_LOG_LEVEL", "").strip()
        if level:
            self.logging.level = level.upper()

        if self.precision.min_bits < 16:
            raise ValueError(f"precision.min_bits must be at least 16, got: {self.precision.min_bits}")
        if not (self.precision.min_bits <= self.precision.start_bits <= self.precision.cap_bits):
            raise ValueError(
                "Precision must satisfy min_bits <= start_bits <= cap_bits, got: "
                f"{self.precision.min_bits}, {self.precision.start_bits}, {self.precision.cap_bits}"
            )

        if self.algebra.degree_cap < 1:
            raise ValueError(f"algebra.degree_cap must be positive, got: {self.algebra.degree_cap}")

        if self.criteria.prefix < 2:
            raise ValueError(f"criteria.prefix must be at least 2, got: {self.criteria.prefix}")

        if self.evaluator.max_terms < 1 or self.evaluator.stall_limit < 1:
            raise ValueError("evaluator.max_terms and evaluator.stall_limit must be positive")

        if self.lemmalab.decrease_factor < 1:
            raise ValueError(f"lemmalab.decrease_factor must be >= 1, got: {self.lemmalab.decrease_factor}")
        if self.lemmalab.lookahead < 1:
            raise ValueError(f"lemmalab.lookahead must be at least 1, got: {self.lemmalab.lookahead}")

        if self.report.format not in REPORT_FORMATS:
            raise ValueError(f"Invalid report format: {self.report.format}. Must be 'text' or 'structured'")

        if self.logging.level.upper() not in LOG_LEVELS:
            raise ValueError(f"Invalid log level: {self.logging.level}. Must be one of {', '.join(LOG_LEVELS)}")


SECTIONS = {
    "precision": PrecisionConfig,
    "algebra": AlgebraConfig,
    "criteria": CriteriaConfig,
    "evaluator": EvaluatorConfig,
    "lemmalab": LemmaConfig,
    "report": ReportConfig,
    "logging": LoggingConfig,
}


def _nested_dict_to_dataclass(cls, data: Dict[str, Any]) -> Any:
    """Convert nested dictionary to dataclass instance."""
    if not data:
        return cls()

    field_types = {f.name: f.type for f in cls.__dataclass_fields__.values()}
    kwargs = {}

    for key, value in data.items():
        if key in field_types:
            field_type = field_types[key]

            if hasattr(field_type, '__dataclass_fields__'):
                kwargs[key] = _nested_dict_to_dataclass(field_type, value)
            else:
                kwargs[key] = value

    return cls(**kwargs)


def load_config(config_path: Optional[Union[str, Path]] = None) -> Config:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to config file. If None, looks for config.yaml in project root.

    Returns:
        Config instance with loaded configuration.

    Raises:
        FileNotFoundError: If config file doesn't exist.
        yaml.YAMLError: If config file has invalid YAML syntax.
        ValueError: If config contains invalid values.
    """
    if config_path is None:
        current_dir = Path(__file__).parent.parent
        config_path = current_dir / "config.yaml"
    else:
        config_path = Path(config_path)

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config_data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"Invalid YAML in config file {config_path}: {e}")

    config_kwargs = {}
    for section_name, section_data in config_data.items():
        section_cls = SECTIONS.get(section_name)
        if section_cls is None:
            raise ValueError(f"Unknown config section: {section_name}")
        config_kwargs[section_name] = _nested_dict_to_dataclass(section_cls, section_data or {})

    return Config(**config_kwargs)


# Global config instance
_global_config: Optional[Config] = None


def get_config(config_path: Optional[Union[str, Path]] = None) -> Config:
    """
    Get global configuration instance.

    Falls back to built-in defaults when no config file exists.
    """
    global _global_config
    if _global_config is None:
        try:
            _global_config = load_config(config_path)
        except FileNotFoundError:
            _global_config = Config()
    return _global_config


def set_config(config: Config) -> None:
    """
    Set global configuration instance.

    Args:
        config: Config instance to set as global.
    """
    global _global_config
    _global_config = config
