"""Shared helpers for the test scripts."""

import tempfile
import traceback

from app.base_cases import BaseCaseStore
from app.solver import Budget

_store = None


def expect_error(exc_type, fn, *args, **kwargs):
    """Call fn and return the exception it raises; fail unless it is exc_type."""
    try:
        fn(*args, **kwargs)
    except exc_type as e:
        return e
    raise AssertionError(f'{getattr(fn, "__name__", fn)} did not raise {exc_type.__name__}')


def shared_store():
    """
    Base-case store over KT_CACHE_DIR (or the repo cache) with autobuild on.

    The first run solves every entry it touches; later runs read the files.
    """
    global _store
    if _store is None:
        _store = BaseCaseStore(autobuild=True, budget=Budget.default().deterministic())
    return _store


def scratch_dir():
    return tempfile.mkdtemp(prefix='kt-test-')


def run_tests(namespace):
    """Run every test_* function in namespace, printing PASS/FAIL per test."""
    names = sorted(n for n, f in namespace.items() if n.startswith('test_') and callable(f))
    failed = 0
    print("=" * 70)
    for name in names:
        try:
            namespace[name]()
            print(f"  PASS  {name}")
        except Exception:
            failed += 1
            print(f"  FAIL  {name}")
            traceback.print_exc()
    print("=" * 70)
    print(f"{len(names) - failed} passed, {failed} failed")
    raise SystemExit(1 if failed else 0)
