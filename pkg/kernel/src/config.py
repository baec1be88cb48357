"""
Kernel configuration loaded from environment variables.

Uses Pydantic BaseSettings for automatic env var loading and validation.
Every field can be set through a ``LAMBDA_UP_``-prefixed variable or a
``.env`` file; CLI flags override the loaded values.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-011)

TODO:
- None
"""

from pydantic import field_validator
from pydantic_settings import BaseSettings

from kernel.src.generator import GenConfig

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class KernelSettings(BaseSettings):
    """Kernel configuration.

    Attributes:
        seed: Base seed for the law suites (64-bit).
        cases: Generated cases per law.
        size: Node budget for generated terms.
        max_ctx_len: Longest generated context.
        max_ty_depth: Arrow nesting bound for generated types.
        weaken_bias: Probability of generating ``↑`` over a subterm.
        step_limit: Beta-step bound for ``normalize``.
        log_level: Root log level name.
    """

    seed: int = 1
    cases: int = 1000
    size: int = 40
    max_ctx_len: int = 5
    max_ty_depth: int = 3
    weaken_bias: float = 0.3
    step_limit: int = 1_000_000
    log_level: str = "WARNING"

    @field_validator("seed")
    @classmethod
    def seed_must_fit_64_bits(cls, v: int) -> int:
        """Validate the seed is an unsigned 64-bit value."""
        if not 0 <= v < 2**64:
            raise ValueError("LAMBDA_UP_SEED must be in [0, 2**64)")
        return v

    @field_validator("cases", "size", "step_limit")
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        """Validate counts and bounds are at least 1."""
        if v < 1:
            raise ValueError("value must be >= 1")
        return v

    @field_validator("max_ctx_len", "max_ty_depth")
    @classmethod
    def must_be_non_negative(cls, v: int) -> int:
        """Validate context length and type depth bounds are not negative."""
        if v < 0:
            raise ValueError("value must be >= 0")
        return v

    @field_validator("weaken_bias")
    @classmethod
    def weaken_bias_must_be_probability(cls, v: float) -> float:
        """Validate the weakening bias is a probability."""
        if not 0.0 <= v <= 1.0:
            raise ValueError("LAMBDA_UP_WEAKEN_BIAS must be in [0, 1]")
        return v

    @field_validator("log_level")
    @classmethod
    def log_level_must_be_known(cls, v: str) -> str:
        """Normalise to upper case and reject unknown level names."""
        level = v.upper()
        if level not in _LOG_LEVELS:
            choices = ", ".join(_LOG_LEVELS)
            raise ValueError(f"LAMBDA_UP_LOG_LEVEL must be one of {choices}")
        return level

    def gen_config(self, seed: int | None = None) -> GenConfig:
        """Build the generator configuration, optionally with another seed."""
        return GenConfig(
            seed=self.seed if seed is None else seed,
            max_term_size=self.size,
            max_ctx_len=self.max_ctx_len,
            max_ty_depth=self.max_ty_depth,
            weaken_bias=self.weaken_bias,
        )

    model_config = {
        "env_prefix": "LAMBDA_UP_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
    }
