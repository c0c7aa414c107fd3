"""Run the bundled corpus and compare every report body with its golden file."""

import sys

from galab.cli import corpus_run


def main():
    results = corpus_run(only=sys.argv[1:])
    for name, status in results:
        print(f"{status:9s} {name}")
    bad = [r for r in results if r[1] != "match"]
    print(f"{len(results) - len(bad)}/{len(results)} match")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
