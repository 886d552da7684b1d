from pathlib import Path

from django.conf import settings

from esl_apps.cli.management.commands._base import EslCommand, parse_formats
from esl_apps.core.exceptions import UsageError
from esl_apps.core.sampling import make_rng
from esl_apps.harness.services.plots import plot_bound_gaps
from esl_apps.harness.services.runner import run_experiment
from esl_apps.harness.services.store import load_records
from esl_apps.harness.services.verification import assert_all, bound_gaps, verify_model, verify_records
from esl_apps.mdp.services.gridworld import build_gridworld

FORMATS = ("text", "svg")


class Command(EslCommand):
    help = "Check distance, index and bound invariants on stored records or a fresh run"

    def add_arguments(self, parser):
        parser.add_argument("--records", help="Record store to check; without it a fresh run is made from the config")
        self.add_config_arguments(parser)
        parser.add_argument(
            "--pairs",
            type=int,
            default=50,
            help="Random policy pairs for the model checks (default: 50)",
        )
        parser.add_argument(
            "--format",
            default="text",
            help="Extra outputs, comma separated; svg writes the bound slack histogram (default: text)",
        )

    def run(self, **options):
        formats = parse_formats(options["format"], FORMATS)
        tol = settings.ESL_TOLERANCE
        if options["pairs"] < 0:
            raise UsageError("--pairs must be non-negative")
        out_dir = Path(options.get("out") or settings.ESL_OUTPUT_DIR)

        results = []
        if options.get("records"):
            self.stdout.write(f"Checking records in {options['records']}...")
            records = load_records(options["records"])
            if not records:
                raise UsageError(f"no records in {options['records']}")
        else:
            cfg = self.load_experiment(options)
            out_dir = Path(cfg.output_dir)
            self.stdout.write(f"Running {cfg} for verification...")
            records = run_experiment(cfg)
            if options["pairs"]:
                self.stdout.write(f"Checking bounds on {options['pairs']} random policy pairs...")
                results.extend(
                    verify_model(
                        build_gridworld(cfg.env),
                        make_rng(cfg.base_seed),
                        n_pairs=options["pairs"],
                        tol=tol,
                        action_scale=cfg.backend.action_scale,
                    )
                )
        results = verify_records(records, tol=tol) + results

        for result in results:
            style = self.style.SUCCESS if result["success"] else self.style.ERROR
            self.stdout.write(style(f"   {'✓' if result['success'] else '✗'} {result['message']}"))
        if "svg" in formats:
            path = plot_bound_gaps(bound_gaps(records), out_dir / "bound_gaps.svg")
            self.stdout.write(f"Wrote {path}")

        assert_all(results)
        checked = sum(result["data"]["checked"] for result in results)
        self.stdout.write(
            self.style.SUCCESS(
                f"\n✅ Verification complete!\n"
                f"📊 Summary:\n"
                f"   • Checks: {len(results)}\n"
                f"   • Cases checked: {checked}\n"
                f"   • Tolerance: {tol:g}"
            )
        )
