import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from esl_apps.core.exceptions import (
    ConfigError,
    ConstructionError,
    EslError,
    RecordStoreError,
    UsageError,
    VerificationError,
)
from esl_apps.harness.services.config import load_config

logger = logging.getLogger(__name__)

USAGE_EXIT = 1
VERIFY_EXIT = 2
IO_EXIT = 3

BACKEND_ALIASES = {"exact": "exact_w1"}
BACKEND_CHOICES = ["exact", "exact_w1", "empirical_w1", "otdd", "sinkhorn"]


def parse_formats(value: str, allowed) -> list:
    formats = [item.strip() for item in value.split(",") if item.strip()]
    unknown = [item for item in formats if item not in allowed]
    if unknown or not formats:
        raise UsageError(f"unknown output format {unknown[0] if unknown else value!r}; choose from {list(allowed)}")
    return formats


class EslCommand(BaseCommand):
    """Base for the esl-admin subcommands.

    Argument errors and library errors both end as ``CommandError`` with
    the exit status for their kind.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argparse errors become CommandError (exit 1) instead of exit 2
        parser.called_from_command_line = False
        return parser

    def add_config_arguments(self, parser):
        parser.add_argument("--config", help="Experiment config file (key=value lines)")
        parser.add_argument("--preset", help="Named experiment preset, e.g. deterministic-psrl")
        parser.add_argument(
            "--overrides",
            nargs="*",
            default=[],
            metavar="KEY=VALUE",
            help="Config keys to override, applied after the config file",
        )
        parser.add_argument("--out", help="Output directory (default: ESL_OUTPUT_DIR)")
        parser.add_argument("--seed", type=int, help="Base seed; trial i uses seed + i")
        parser.add_argument("--trials", type=int, help="Number of trials")
        parser.add_argument("--backend", choices=BACKEND_CHOICES, help="Distance backend")
        parser.add_argument("--rollouts", type=int, help="Rollouts per policy for sampled backends")
        parser.add_argument("--workers", type=int, help="Parallel trials (default: ESL_WORKERS)")

    def load_experiment(self, options):
        backend = options.get("backend")
        return load_config(
            path=options.get("config"),
            preset=options.get("preset"),
            overrides=options.get("overrides"),
            defaults={"output_dir": settings.ESL_OUTPUT_DIR, "workers": settings.ESL_WORKERS},
            base_seed=options.get("seed"),
            trials=options.get("trials"),
            backend=BACKEND_ALIASES.get(backend, backend),
            rollouts=options.get("rollouts"),
            output_dir=options.get("out"),
            workers=options.get("workers"),
        )

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except ConfigError as exc:
            key = f" [{exc.key}]" if exc.key else ""
            raise CommandError(f"Config error{key}: {exc}", returncode=USAGE_EXIT) from exc
        except VerificationError as exc:
            for failure in exc.failures:
                self.stderr.write(f"   • {failure}")
            raise CommandError(f"Verification failed: {exc}", returncode=VERIFY_EXIT) from exc
        except RecordStoreError as exc:
            raise CommandError(f"I/O error: {exc}", returncode=IO_EXIT) from exc
        except (UsageError, ConstructionError) as exc:
            raise CommandError(str(exc), returncode=USAGE_EXIT) from exc
        except OSError as exc:
            raise CommandError(f"I/O error: {exc}", returncode=IO_EXIT) from exc
        except EslError as exc:
            logger.exception("%s failed", type(self).__module__)
            raise CommandError(str(exc), returncode=USAGE_EXIT) from exc

    def run(self, **options):
        raise NotImplementedError
