"""
Shared test fixtures for kernel tests.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-001)
- 2026-10-19: Restore root logger after CLI tests (STORY-011)

TODO:
- None
"""

from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterator
from pathlib import Path
from typing import Any

import pytest
from kernel.src.logging_config import JSONFormatter
from kernel.src.parser import parse_ctx, parse_subst, parse_term, parse_type
from kernel.src.typecheck import TypedSubst, TypedTerm, check_subst, check_term

FIXTURES = Path(__file__).parent / "fixtures"

# All KernelSettings environment variable names, used for cleanup.
_ALL_KERNEL_ENV_VARS = (
    "LAMBDA_UP_SEED",
    "LAMBDA_UP_CASES",
    "LAMBDA_UP_SIZE",
    "LAMBDA_UP_MAX_CTX_LEN",
    "LAMBDA_UP_MAX_TY_DEPTH",
    "LAMBDA_UP_WEAKEN_BIAS",
    "LAMBDA_UP_STEP_LIMIT",
    "LAMBDA_UP_LOG_LEVEL",
)


@pytest.fixture(autouse=True)
def _clean_kernel_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Remove all kernel env vars and isolate from .env files before each test.

    Changes working directory to tmp_path so no .env file is accidentally
    loaded by Pydantic BaseSettings.
    """
    for var in _ALL_KERNEL_ENV_VARS:
        monkeypatch.delenv(var, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture(autouse=True)
def _restore_root_logger() -> Iterator[None]:
    """Drop JSON handlers installed by setup_logging during a test."""
    root = logging.getLogger()
    level = root.level
    yield
    for handler in root.handlers[:]:
        if isinstance(handler.formatter, JSONFormatter):
            root.removeHandler(handler)
    root.setLevel(level)


@pytest.fixture(scope="session")
def golden() -> dict[str, Any]:
    """Worked examples and expected outputs."""
    return json.loads((FIXTURES / "golden.json").read_text(encoding="utf-8"))


def _seal_term(term: str, ctx: str = "[]", ty: str = "N") -> TypedTerm:
    return check_term(parse_ctx(ctx), parse_type(ty), parse_term(term))


def _seal_subst(subst: str, src: str = "[]", dst: str = "[]") -> TypedSubst:
    return check_subst(parse_ctx(src), parse_ctx(dst), parse_subst(subst))


@pytest.fixture()
def seal_term() -> Callable[..., TypedTerm]:
    """Parse and typecheck a term: ``seal_term(term, ctx, ty)``.

    Golden entries can be splatted directly: ``seal_term(**entry)``.
    """
    return _seal_term


@pytest.fixture()
def seal_subst() -> Callable[..., TypedSubst]:
    """Parse and typecheck a substitution: ``seal_subst(subst, src, dst)``."""
    return _seal_subst
