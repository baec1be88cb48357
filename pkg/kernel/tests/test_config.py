"""
Unit tests for kernel configuration (STORY-011).

Tests verify:
- Defaults apply when no environment variables are set.
- LAMBDA_UP_* variables and .env files override defaults.
- Out-of-range values are rejected by validation.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-011)

TODO:
- None
"""

from pathlib import Path

import pytest
from kernel.src.config import KernelSettings
from pydantic import ValidationError


class TestDefaults:
    """Settings without any environment."""

    def test_defaults(self) -> None:
        settings = KernelSettings()
        assert settings.seed == 1
        assert settings.cases == 1000
        assert settings.size == 40
        assert settings.step_limit == 1_000_000
        assert settings.log_level == "WARNING"

    def test_gen_config_mirrors_settings(self) -> None:
        cfg = KernelSettings(size=12, weaken_bias=0.5).gen_config()
        assert cfg.seed == 1
        assert cfg.max_term_size == 12
        assert cfg.weaken_bias == 0.5

    def test_gen_config_seed_override(self) -> None:
        assert KernelSettings().gen_config(seed=99).seed == 99


class TestEnvironment:
    """Environment variables and .env files."""

    def test_env_vars(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("LAMBDA_UP_SEED", "42")
        monkeypatch.setenv("LAMBDA_UP_CASES", "5")
        monkeypatch.setenv("LAMBDA_UP_LOG_LEVEL", "debug")
        settings = KernelSettings()
        assert settings.seed == 42
        assert settings.cases == 5
        assert settings.log_level == "DEBUG"

    def test_dotenv_file(self, tmp_path: Path) -> None:
        """The autouse fixture has already moved into tmp_path."""
        (tmp_path / ".env").write_text("LAMBDA_UP_SIZE=17\n", encoding="utf-8")
        assert KernelSettings().size == 17

    def test_explicit_arguments_win(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("LAMBDA_UP_CASES", "5")
        assert KernelSettings(cases=9).cases == 9


class TestValidation:
    """Rejected values."""

    @pytest.mark.parametrize(
        "field,value",
        [
            ("seed", -1),
            ("seed", 2**64),
            ("cases", 0),
            ("size", 0),
            ("step_limit", 0),
            ("max_ctx_len", -1),
            ("weaken_bias", -0.1),
            ("log_level", "LOUD"),
        ],
    )
    def test_rejects(self, field: str, value: object) -> None:
        with pytest.raises(ValidationError):
            KernelSettings(**{field: value})

    def test_bad_env_value(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("LAMBDA_UP_CASES", "many")
        with pytest.raises(ValidationError):
            KernelSettings()
