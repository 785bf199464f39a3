#!/usr/bin/env python3
"""
Main entry point for linfdiff

    python -m src.main differentiate --catalog sl2
"""

import sys
from typing import List, Optional

from .ui.cli import CLI


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    return CLI().run(argv)


if __name__ == '__main__':
    sys.exit(main())
