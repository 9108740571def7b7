import logging

from django.core.management.base import BaseCommand, CommandError

from attribution.types import Method
from distances.types import KIND_NAMES
from pipeline.services import resolve_run, run_stage
from pipeline.types import SUBCOMMANDS
from utils.exceptions import CrossCheckError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = (
        "Cross-trained explanation evaluation. Subcommands: " + ", ".join(SUBCOMMANDS) + ". "
        "Exit codes: 2 usage or config errors, 3 data errors, 4 numeric failures."
    )
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("subcommand", choices=SUBCOMMANDS)
        parser.add_argument("--config", help="YAML or JSON run config; defaults to <output>/run_config.yaml")
        parser.add_argument("--output", help="Run directory (default: output_dir of the config, else XAI_OUTPUT_DIR)")
        parser.add_argument("--method", type=str.upper, choices=[m.value for m in Method],
                            help="Attribution method override")
        parser.add_argument("--distance", type=str.lower, choices=KIND_NAMES, help="Distance kind override")
        parser.add_argument("--k", type=int, help="Number of folds override")
        parser.add_argument("--n-jobs", type=int, help="joblib workers for training and explanation")
        parser.add_argument("--strict", action="store_true", default=None,
                            help="Abort when fold accuracies spread more than the tolerance")
        parser.add_argument("--size", type=int, default=32, help="sanity: map size")
        parser.add_argument("--steps", type=int, default=100, help="sanity: spatial steps")
        parser.add_argument("--repeats", type=int, default=50, help="sanity: noise repeats per sigma")

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        try:
            config, paths = resolve_run(
                options["config"], options["output"],
                method=options["method"],
                distance=options["distance"],
                k=options["k"],
                n_jobs=options["n_jobs"],
                strict_spread=options["strict"],
            )
            stage_options = {}
            if subcommand == "sanity":
                stage_options = {"image_size": options["size"], "steps": options["steps"],
                                 "repeats": options["repeats"]}
            message = run_stage(subcommand, config, paths, **stage_options)
        except CrossCheckError as exc:
            logger.debug("xai %s failed", subcommand, exc_info=True)
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        self.stdout.write(self.style.SUCCESS(message))
