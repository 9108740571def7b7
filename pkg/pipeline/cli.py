"""
``cli_run(argv)`` runs ``manage.py xai`` in-process and returns its exit code:
0 on success, 2 for usage or config errors, 3 for data errors, 4 for numeric
failures.
"""

import os
import sys
from typing import Optional, Sequence

import django
from django.apps import apps


def cli_run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "crosscheck.settings")
    if not apps.ready:
        django.setup()
    from pipeline.management.commands.xai import Command

    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        Command(stdout=stdout, stderr=stderr).run_from_argv(["manage.py", "xai", *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(cli_run())
