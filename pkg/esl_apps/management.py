import os
import sys


def main(argv=None):
    """Entry point of the ``esl-admin`` console script."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "esl_apps.settings")
    from django.core.management import execute_from_command_line

    execute_from_command_line(argv or sys.argv)


if __name__ == "__main__":
    main()
