import sys
from pathlib import Path

# plots/ is a sibling package outside src/; make it importable in tests
sys.path.insert(0, str(Path(__file__).parent))
