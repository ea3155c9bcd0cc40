"""Allow ``python -m rankdate`` as an alias for the console script."""

from .cli import main

main()
