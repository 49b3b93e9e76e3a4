"""Command-line entry point: figures <kind> <in.csv> <out.png>.

Exit codes match the pipeline CLI: 0 success, 1 usage error, 2 bad input
data, 3 internal error.
"""

import sys
import traceback

from .render import KINDS, FigureError, FigureSpec, render

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

USAGE = f"usage: figures <kind> <in.csv> <out.png>\nkinds: {', '.join(KINDS)}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if len(argv) != 3:
        print(USAGE, file=sys.stderr)
        return EXIT_USAGE
    kind, in_csv, out_png = argv
    if kind not in KINDS:
        print(f"figures: unknown kind {kind!r}\n{USAGE}", file=sys.stderr)
        return EXIT_USAGE
    try:
        fig = render(FigureSpec(kind, in_csv, out_png))
    except FigureError as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    import matplotlib.pyplot as plt
    plt.close(fig)
    print(f"figures: wrote {out_png}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
