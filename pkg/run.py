"""
Knight's Tours - Flask Application Entry Point

Run this file to start the local tour server.
Usage: python run.py

The application will be available at http://localhost:5000
"""

import os
import sys

# Add the project directory to the path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app import create_app
from app.base_cases import BaseCaseStore

app = create_app()


def check_cache():
    """Report whether the base-case cache is ready for constructions"""
    store = BaseCaseStore(app.config.get('KT_CACHE_DIR'), autobuild=False)
    missing = store.missing()
    if missing:
        print(f"Base-case cache at {store.cache_dir} is missing {len(missing)} entries.")
        print("Run `python kt.py bootstrap` before constructing tours.")
    else:
        print(f"Base-case cache at {store.cache_dir} is complete.")


if __name__ == '__main__':
    print("=" * 60)
    print("  Knight's Tours - Classification & Construction Server")
    print("=" * 60)
    print()

    check_cache()

    print()
    print("Starting server...")
    print("Navigate to: http://localhost:5000")
    print("Press Ctrl+C to stop the server")
    print()

    # Run the Flask development server
    app.run(debug=True, host='0.0.0.0', port=5000)
