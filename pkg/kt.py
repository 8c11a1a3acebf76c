"""
Knight's Tours - command-line entry point

Usage: python kt.py <command> [options]
       python kt.py exists 4x3x2x2
       python kt.py construct 5x6x2 -o tour.json

The same commands are available as `flask --app run tours <command>`.
"""

import os
import sys

# Add the project directory to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import create_app
from app.cli import tours_cli

app = create_app()


if __name__ == '__main__':
    with app.app_context():
        tours_cli.main(prog_name='kt')
