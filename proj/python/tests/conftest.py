import sys
from pathlib import Path

# allow running against an in-tree build (python/sftlab/_sftlab*.so) without installing
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))
