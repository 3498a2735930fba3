import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

# Load environment variables first
load_dotenv()

from src.cli.commands import dispatch
from src.cli.parser import parse_run_spec
from src.config.settings import get_settings
from src.core.exceptions import SimulatorException, exit_code_for
from src.utils.logging_config import get_cli_logger, setup_logging

if get_settings().DEBUG:
    setup_logging(log_level="DEBUG")

logger = get_cli_logger()


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        spec = parse_run_spec(argv)
    except SimulatorException as exc:
        logger.error("invalid_arguments", error=str(exc))
        sys.stderr.write(f"{exc}\n")
        return exit_code_for(exc)
    return dispatch(spec)


if __name__ == "__main__":
    sys.exit(main())
