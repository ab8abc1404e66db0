import sys
from pathlib import Path

# the renderers are standalone scripts living one directory up
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
