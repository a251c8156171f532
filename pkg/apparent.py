from __future__ import annotations

from apparent_size.cli import main


if __name__ == "__main__":
    raise SystemExit(main())
