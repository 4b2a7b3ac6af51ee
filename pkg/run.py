"""Run the command-line tool from a checkout."""

import sys
from pathlib import Path

# Add the project directory to Python path
project_dir = Path(__file__).parent
sys.path.insert(0, str(project_dir))

if __name__ == "__main__":
    from app.main import main

    sys.exit(main())
