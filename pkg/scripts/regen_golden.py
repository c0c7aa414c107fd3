"""Rewrite the golden report bodies from the current pipeline.

Only run this after the pipeline has been checked against the examples;
the golden files are what `galab corpus run` compares against.
"""

from galab.cli import corpus_run

if __name__ == "__main__":
    for name, status in corpus_run(update=True):
        print(f"{status:9s} {name}")
