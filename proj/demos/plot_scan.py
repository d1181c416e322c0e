"""Plot the output of `mdr qubit-scan` (and optionally `mdr cv-scan`).

    mdr qubit-scan --out scan.csv
    mdr cv-scan --out cv.csv
    python3 plot_scan.py scan.csv [cv.csv]
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd


def main(args):
    if not args:
        print(__doc__)
        return 2
    scan = pd.read_csv(args[0])
    fig, axes = plt.subplots(1, 2 if len(args) > 1 else 1, figsize=(11, 4), squeeze=False)
    ax = axes[0][0]
    for r, rows in scan.groupby("r"):
        if r in (0.0, 1.0) or abs(r - 0.5) < 0.011:
            ax.plot(rows.theta_rad, rows.disturbance_bits, label=f"D, r={r:.2f}")
            ax.plot(rows.theta_rad, rows.error_bits, "--", label=f"E, r={r:.2f}")
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("bits")
    ax.legend(fontsize=8)

    if len(args) > 1:
        cv = pd.read_csv(args[1])
        ax = axes[0][1]
        ax.semilogx(cv["lambda"], cv.gap_bits)
        ax.set_xlabel("lambda")
        ax.set_ylabel("gap (bits)")
    fig.tight_layout()
    fig.savefig("scan.png", dpi=120)
    print("wrote scan.png")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
