import sys
from pathlib import Path

from hypothesis import settings

# test modules import sibling helpers (corpusgen, oracle_bleu) directly
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("suite", deadline=None, max_examples=100)
settings.load_profile("suite")
