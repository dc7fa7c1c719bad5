"""
ModLP - Shipped module corpus.
"""

from src.data.corpus import CORPUS_DIR, corpus_dir, corpus_files, load_corpus

__all__ = ["CORPUS_DIR", "corpus_dir", "corpus_files", "load_corpus"]
