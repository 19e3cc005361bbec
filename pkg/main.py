import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "geometric-phase-qpt" / "src"))

from main import main as cli_main  # noqa: E402


def main():
    return cli_main()


if __name__ == "__main__":
    sys.exit(main())
