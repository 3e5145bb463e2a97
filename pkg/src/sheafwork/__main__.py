"""sheafwork CLI entry point."""

from sheafwork.cli import app

if __name__ == "__main__":
    app()
