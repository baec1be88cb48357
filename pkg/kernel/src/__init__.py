"""
Explicit-weakening lambda calculus kernel.

Simply-typed de Bruijn terms with an explicit weakening constructor,
substitutions built from identity/weaken/cons, meta-level instantiation
and composition, and a classical de Bruijn oracle to cross-check them.

CHANGELOG:
- 2026-10-19: Initial creation (STORY-001)

TODO:
- None
"""
