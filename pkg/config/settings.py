"""
Engine settings and configuration management using Pydantic.
"""
from typing import Optional
from enum import Enum
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    # python-dotenv not installed, skip loading .env file
    pass


class LogLevel(str, Enum):
    """Logging levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class OutputFormat(str, Enum):
    """Value rendering modes of the command line front end."""
    TEXT = "text"
    JSON = "json"


class EngineSettings(BaseSettings):
    """Numerical and front-end settings with Pydantic validation."""

    # Comparison tolerances
    tol_rel: float = Field(default=1e-9, gt=0.0, description="Relative comparison tolerance", alias="GA_TOL_REL")
    tol_abs: float = Field(default=1e-12, gt=0.0, description="Absolute comparison floor", alias="GA_TOL_ABS")

    # Dimension limits
    max_dim: int = Field(default=12, ge=1, le=12, description="Largest supported vector space dimension", alias="GA_MAX_DIM")
    component_max_dim: int = Field(default=6, ge=1, le=12, description="Largest dimension for elementary extensor components", alias="GA_COMPONENT_MAX_DIM")
    component_max_arity: int = Field(default=3, ge=1, description="Largest arity for elementary extensor components", alias="GA_COMPONENT_MAX_ARITY")

    # Numerical thresholds
    singular_threshold: float = Field(default=1e-12, gt=0.0, description="Scale-aware floor for determinants", alias="GA_SINGULAR_THRESHOLD")
    symmetry_tolerance: float = Field(default=1e-12, ge=0.0, description="Absolute asymmetry allowed in metric input", alias="GA_SYMMETRY_TOLERANCE")
    degeneracy_threshold: float = Field(default=1e-12, gt=0.0, description="Relative eigenvalue floor for metrics", alias="GA_DEGENERACY_THRESHOLD")
    jacobi_tolerance: float = Field(default=1e-13, gt=0.0, description="Off-diagonal convergence threshold", alias="GA_JACOBI_TOLERANCE")
    jacobi_max_sweeps: int = Field(default=100, gt=0, description="Maximum Jacobi sweeps", alias="GA_JACOBI_MAX_SWEEPS")

    # Front-end settings
    output_precision: int = Field(default=12, ge=1, le=17, description="Significant digits in text output", alias="GA_PRECISION")
    output_format: OutputFormat = Field(default=OutputFormat.TEXT, description="Value rendering mode", alias="GA_FORMAT")
    prompt: str = Field(default="ga> ", description="Interactive prompt", alias="GA_PROMPT")

    # Logging settings
    log_level: LogLevel = Field(default=LogLevel.WARNING, description="Logging level", alias="LOG_LEVEL")
    log_structured: bool = Field(default=False, description="Emit JSON log records", alias="LOG_STRUCTURED")
    log_file: Optional[str] = Field(default=None, description="Optional log file path", alias="LOG_FILE")

    # Development settings
    debug: bool = Field(default=False, description="Enable debug mode", alias="DEBUG")

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "extra": "ignore",
        "populate_by_name": True
    }

    @field_validator('tol_rel')
    @classmethod
    def validate_tol_rel(cls, v):
        """Relative tolerance must stay well below one."""
        if v >= 1e-2:
            raise ValueError("Relative tolerance must be smaller than 1e-2")
        return v

    @field_validator('component_max_dim')
    @classmethod
    def validate_component_max_dim(cls, v, info):
        """Component limits cannot exceed the dimension cap."""
        max_dim = info.data.get('max_dim', 12)
        if v > max_dim:
            raise ValueError(f"component_max_dim must not exceed max_dim ({max_dim})")
        return v

    @field_validator('prompt')
    @classmethod
    def validate_prompt(cls, v):
        """Prompt cannot be empty."""
        if not v:
            raise ValueError("Prompt cannot be empty")
        return v


# Global settings instance
_settings: Optional[EngineSettings] = None


def get_settings() -> EngineSettings:
    """Get the global settings instance with automatic validation."""
    global _settings
    if _settings is None:
        _settings = EngineSettings()
    return _settings


def reload_settings() -> EngineSettings:
    """Reload settings from environment (useful for testing)."""
    global _settings
    _settings = EngineSettings()
    return _settings
