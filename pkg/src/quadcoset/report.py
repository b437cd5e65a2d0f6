"""Figure rendering for the CLI report paths.

All plotting is presentation-only: exact values are converted to floats
at the very end, and files are written with the Agg backend so the CLI
never needs a display.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import padic, reduction


def regularity_figure(path, coset, verdict):
    """Cumulative locally- vs globally-represented counts up to the bound."""
    bound = verdict.bound
    red = reduction.reduce(coset).coset
    represented = reduction.represented_values(red, bound)
    primes = padic.relevant_primes(red)
    xs, loc, glob = [], [], []
    nloc = nglob = 0
    for a in range(bound + 1):
        if a in represented:
            nloc += 1
            nglob += 1
        elif all(padic.local_represents(red, p, a) for p in primes):
            nloc += 1
        xs.append(a)
        loc.append(nloc)
        glob.append(nglob)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(xs, loc, label="represented by the genus", lw=1.6)
    ax.plot(xs, glob, label="represented globally", lw=1.0, ls="--")
    if verdict.failure_witness is not None:
        a = verdict.failure_witness.value
        ax.axvline(a, color="crimson", lw=1.0)
        ax.annotate(f"first gap {a}", (a, 0), rotation=90,
                    va="bottom", ha="right", color="crimson", fontsize=8)
    ax.set_xlabel("value")
    ax.set_ylabel("cumulative count")
    ax.set_title(f"{verdict.status} (bound {bound})")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def census_figure(path, records):
    """Discriminant distribution of census records, split by verdict."""
    regular = [float(r.discriminant) for r in records
               if r.verdict.failure_witness is None]
    irregular = [float(r.discriminant) for r in records
                 if r.verdict.failure_witness is not None]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if regular or irregular:
        ax.hist(
            [regular, irregular],
            bins=min(30, max(5, len(records))),
            stacked=True,
            label=[f"regular up to bound ({len(regular)})",
                   f"irregular ({len(irregular)})"],
            color=["tab:blue", "crimson"],
        )
        ax.legend(fontsize=8)
    ax.set_xlabel("discriminant")
    ax.set_ylabel("classes")
    ax.set_title(f"census: {len(records)} classes")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def identity_figure(path, report):
    """Representation counts of the three counting-identity enumerations."""
    ns = [r.n for r in report.rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, [r.odd_form_count for r in report.rows],
            label="r1(8n+5)", lw=0.9)
    ax.plot(ns, [r.sub_form_count for r in report.rows],
            label="r2(8n+5)", lw=0.9)
    ax.plot(ns, [r.coset_count for r in report.rows],
            label="r(n)", lw=0.9, ls="--")
    ax.set_xlabel("n")
    ax.set_ylabel("representations")
    ok = "hold" if report.ok else "FAIL"
    ax.set_title(f"r = r1 - r2 and r1 = 2 r2 {ok} for n <= {report.n_max}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
