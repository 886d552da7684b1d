from pathlib import Path

from django.conf import settings

from esl_apps.cli.management.commands._base import EslCommand, parse_formats
from esl_apps.core.exceptions import UsageError
from esl_apps.harness.services.aggregation import (
    aggregate_by_algorithm,
    write_aggregate_csv,
    write_aggregate_json,
)
from esl_apps.harness.services.store import load_records

FORMATS = ("csv", "json")


class Command(EslCommand):
    help = "Recompute aggregate tables from stored records"

    def add_arguments(self, parser):
        parser.add_argument("--records", nargs="+", required=True, help="One or more record stores")
        parser.add_argument("--out", help="Output directory (default: ESL_OUTPUT_DIR)")
        parser.add_argument("--name", default="aggregate", help="Output file stem (default: aggregate)")
        parser.add_argument(
            "--format",
            default="csv,json",
            help="Table formats, comma separated (default: csv,json)",
        )

    def run(self, **options):
        formats = parse_formats(options["format"], FORMATS)
        records = []
        for path in options["records"]:
            records.extend(load_records(path))
        if not records:
            raise UsageError("the record stores are empty")
        rows = aggregate_by_algorithm(records)
        out_dir = Path(options.get("out") or settings.ESL_OUTPUT_DIR)

        written = []
        if "csv" in formats:
            written.append(write_aggregate_csv(rows, out_dir / f"{options['name']}.csv"))
        if "json" in formats:
            written.append(write_aggregate_json(rows, out_dir / f"{options['name']}.json"))
        for row in rows:
            self.stdout.write(row.summary())
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✅ Export complete!\n"
                f"📊 Summary:\n"
                f"   • Records: {len(records)}\n"
                f"   • Algorithms: {len(rows)}\n"
                + "".join(f"   • Wrote {path}\n" for path in written)
            )
        )
