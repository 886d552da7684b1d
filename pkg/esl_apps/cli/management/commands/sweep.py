from pathlib import Path

from esl_apps.cli.management.commands._base import EslCommand
from esl_apps.core.exceptions import UsageError
from esl_apps.harness.services.aggregation import write_table
from esl_apps.harness.services.sweeps import SWEEP_KINDS, run_sweep

VALUE_CASTS = {
    "difficulty": str,
    "ucrl_delta": float,
    "rollout_count": int,
    "estimation_error": int,
}


class Command(EslCommand):
    help = "Run a preset sweep and write one table row per setting"

    def add_arguments(self, parser):
        parser.add_argument("kind", help=f"Sweep kind: {', '.join(name for name, _ in SWEEP_KINDS)}")
        self.add_config_arguments(parser)
        parser.add_argument(
            "--values",
            help="Comma separated settings replacing the default grid (tasks, deltas or rollout counts)",
        )

    def run(self, **options):
        kind = options["kind"]
        if kind not in VALUE_CASTS:
            raise UsageError(f"unknown sweep kind {kind!r}; choose from {sorted(VALUE_CASTS)}")
        values = None
        if options.get("values"):
            try:
                values = [VALUE_CASTS[kind](item.strip()) for item in options["values"].split(",")]
            except ValueError as exc:
                raise UsageError(f"cannot parse sweep values {options['values']!r}: {exc}") from exc

        cfg = self.load_experiment(options)
        self.stdout.write(f"Running {kind} sweep from {cfg}...")
        table = run_sweep(kind, cfg, values=values, workers=cfg.workers)
        path = write_table(table, Path(cfg.output_dir) / f"sweep_{kind}.csv")

        self.stdout.write(table.to_string(index=False))
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✅ Sweep complete!\n"
                f"📊 Summary:\n"
                f"   • Kind: {kind}\n"
                f"   • Settings: {len(table)}\n"
                f"   • Wrote {path}"
            )
        )
