import asyncio
import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from app.cli.main import main

if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        print("\nLab run stopped.")
