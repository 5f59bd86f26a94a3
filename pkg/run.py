"""Entry point for the cyclic interference alignment workbench."""

from cyclic_ia.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
