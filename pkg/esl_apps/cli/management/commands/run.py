from pathlib import Path

from esl_apps.cli.management.commands._base import EslCommand, parse_formats
from esl_apps.harness.services.aggregation import aggregate, write_aggregate_csv, write_aggregate_json
from esl_apps.harness.services.config import dump_config
from esl_apps.harness.services.runner import experiment_slug, records_path, run_experiment

FORMATS = ("csv", "json")


class Command(EslCommand):
    help = "Run an experiment: train every trial, measure its geometry and write the aggregate table"

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument("--records", help="Record store path (default: <out>/<name>.jsonl)")
        parser.add_argument(
            "--format",
            default="csv",
            help="Aggregate table formats, comma separated (default: csv)",
        )

    def run(self, **options):
        formats = parse_formats(options["format"], FORMATS)
        cfg = self.load_experiment(options)
        out_dir = Path(cfg.output_dir)
        store = Path(options["records"]) if options.get("records") else records_path(cfg)
        stem = experiment_slug(cfg)

        self.stdout.write(f"Running {cfg} ({cfg.trials} trials, backend {cfg.backend.label})...")
        records = run_experiment(cfg, path=store)
        row = aggregate(records, cfg.agent.algorithm_id)

        written = [store, dump_config(cfg, out_dir / f"{stem}.env")]
        if "csv" in formats:
            written.append(write_aggregate_csv([row], out_dir / f"{stem}_aggregate.csv"))
        if "json" in formats:
            written.append(write_aggregate_json([row], out_dir / f"{stem}_aggregate.json"))

        self.stdout.write(row.summary())
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✅ Experiment complete!\n"
                f"📊 Summary:\n"
                f"   • Trials: {row.n_trials}\n"
                f"   • Converged: {row.n_converged}\n"
                f"   • Failed: {row.n_failed}\n"
                f"   • ESL defined: {row.n_esl_defined}\n"
                f"   • Success rate: {row.sr:.1f}%\n"
                + "".join(f"   • Wrote {path}\n" for path in written)
            )
        )
