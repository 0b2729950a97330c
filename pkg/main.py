"""Entry point for the k-Tinhofer toolkit: ``python main.py <subcommand> ...``."""

from ktinhofer.cli import main

if __name__ == "__main__":
    main()
