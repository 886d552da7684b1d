from pathlib import Path

from django.conf import settings

from esl_apps.cli.management.commands._base import EslCommand, parse_formats
from esl_apps.core.exceptions import UsageError
from esl_apps.harness.services.aggregation import trajectory_frame, write_table
from esl_apps.harness.services.plots import analysis_plots
from esl_apps.harness.services.store import load_records

FORMATS = ("csv", "svg")


class Command(EslCommand):
    help = "Write per-update trajectory tables and plots for stored runs"

    def add_arguments(self, parser):
        parser.add_argument("--records", required=True, help="Record store to analyze")
        parser.add_argument("--out", help="Output directory (default: ESL_OUTPUT_DIR)")
        parser.add_argument(
            "--format",
            default="csv,svg",
            help="Outputs to write, comma separated (default: csv,svg)",
        )

    def run(self, **options):
        formats = parse_formats(options["format"], FORMATS)
        records = load_records(options["records"])
        if not records:
            raise UsageError(f"no records in {options['records']}")
        out_dir = Path(options.get("out") or settings.ESL_OUTPUT_DIR)

        written = []
        frame = trajectory_frame(records)
        if "csv" in formats:
            written.append(write_table(frame, out_dir / "trajectories.csv"))
        if "svg" in formats:
            self.stdout.write("Rendering plots...")
            written.extend(analysis_plots(records, out_dir))

        runs = frame["run_id"].nunique() if len(frame) else 0
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✅ Analysis complete!\n"
                f"📊 Summary:\n"
                f"   • Records: {len(records)}\n"
                f"   • Runs with geometry: {runs}\n"
                f"   • Trajectory rows: {len(frame)}\n"
                + "".join(f"   • Wrote {path}\n" for path in written)
            )
        )
