# coding=utf-8

"""
Sweep outputs: the CSV table, the JSON array, and SVG figures (contour images, iso-Mach curves in the
Gamma-v+ plane, and the tracking-radius heatmap over Gamma x nu).
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use('Agg')

# noinspection PyPep8
import matplotlib.pyplot as plt
# noinspection PyPep8
import numpy as np
# noinspection PyPep8
import pandas as pd

# noinspection PyPep8
from shock_evans.gas_model import v_plus_for_mach, v_star
# noinspection PyPep8
from shock_evans.safe_edit import safe_edit, write_json
# noinspection PyPep8
from shock_evans.sweep import CONTOUR_DIR, CSV_COLUMNS, SweepRecord

__docformat__ = 'restructuredtext en'
__all__ = ('FORMATS', 'CSV_NAME', 'JSON_NAME', 'records_frame', 'write_csv', 'read_csv', 'write_records_json',
           'read_contour', 'plot_contour', 'iso_mach_curves', 'plot_iso_mach', 'plot_tracking_heatmap',
           'emit_outputs')

FORMATS = ('csv', 'json', 'svg')
CSV_NAME = 'results.csv'
JSON_NAME = 'results.json'
FLOAT_FORMAT = '%.17g'
DEFAULT_MACHS = (1.5, 2.0, 3.0, 5.0, 10.0)


def records_frame(records: Iterable[SweepRecord]) -> pd.DataFrame:
    """One row per record in the fixed CSV column order."""
    frame = pd.DataFrame([record.to_dict() for record in records], columns=list(CSV_COLUMNS))
    frame['winding'] = frame['winding'].astype('Int64')
    return frame


def write_csv(records: Iterable[SweepRecord], path: Union[str, Path]) -> Path:
    frame = records_frame(records)
    with safe_edit(path) as files:
        frame.to_csv(files['out'], index=False, float_format=FLOAT_FORMAT)
    return Path(path)


def read_csv(path: Union[str, Path]) -> List[SweepRecord]:
    frame = pd.read_csv(path, float_precision='round_trip', dtype={'status': str, 'winding': 'Int64'})
    records = []
    for row in frame.to_dict(orient='records'):
        winding = row['winding']
        row['winding'] = None if pd.isna(winding) else int(winding)
        records.append(SweepRecord.from_dict(row))
    return records


def write_records_json(records: Iterable[SweepRecord], path: Union[str, Path]) -> Path:
    return write_json(path, [record.to_dict() for record in records])


def read_contour(path: Union[str, Path]) -> Dict[str, np.ndarray]:
    """
    Contour text written by EvansContour.export.

    :return: method -> complex array (lambda, D) stacked as shape (2, n)
    """
    frame = pd.read_csv(path, sep=' ')
    curves = {}
    for method, group in frame.groupby('method', sort=False):
        curves[method] = np.vstack([group['re_lambda'].to_numpy() + 1j * group['im_lambda'].to_numpy(),
                                    group['re_D'].to_numpy() + 1j * group['im_D'].to_numpy()])
    return curves


def plot_contour(contour_file: Union[str, Path], svg_path: Union[str, Path], title: Optional[str] = None) -> Path:
    """Image of the contour under D, normalized at the largest real point, with the origin marked."""
    curves = read_contour(contour_file)
    fig, ax = plt.subplots(figsize=(5, 4))
    for method, (lambdas, values) in curves.items():
        values = values / values[0]
        style = 'b-' if method == 'exterior' else 'r--'
        ax.plot(values.real, values.imag, style, label=method, linewidth=1.0)
    ax.plot([0.0], [0.0], 'k+', markersize=10)
    ax.set_xlabel(r'$\Re D$')
    ax.set_ylabel(r'$\Im D$')
    ax.set_title(title or Path(contour_file).stem)
    ax.legend(loc='best')
    fig.tight_layout()
    fig.savefig(svg_path, format='svg')
    plt.close(fig)
    return Path(svg_path)


def iso_mach_curves(machs: Sequence[float] = DEFAULT_MACHS,
                    gammas: Optional[np.ndarray] = None) -> Dict[float, Tuple[np.ndarray, np.ndarray]]:
    """
    v+ as a function of Gamma at fixed Mach number.

    :return: mach -> (gammas, v_plus)
    """
    gammas = np.linspace(0.05, 2.0, 200) if gammas is None else np.asarray(gammas, dtype=float)
    return {mach: (gammas, np.array([v_plus_for_mach(g, mach) for g in gammas])) for mach in machs}


def plot_iso_mach(svg_path: Union[str, Path], machs: Sequence[float] = DEFAULT_MACHS,
                  records: Sequence[SweepRecord] = ()) -> Path:
    curves = iso_mach_curves(machs)
    fig, ax = plt.subplots(figsize=(5, 4))
    for mach, (gammas, v_plus) in curves.items():
        ax.plot(gammas, v_plus, label=f"M = {mach:g}", linewidth=1.0)
    gammas = next(iter(curves.values()))[0]
    ax.plot(gammas, [v_star(g) for g in gammas], 'k:', label='v*')
    if records:
        ax.plot([r.gamma for r in records], [r.v_plus for r in records], 'k.', markersize=3, label='grid')
    ax.set_xlabel(r'$\Gamma$')
    ax.set_ylabel(r'$v_+$')
    ax.set_ylim(0.0, 1.0)
    ax.legend(loc='lower right', fontsize='small')
    ax.set_title('Iso-Mach curves')
    fig.tight_layout()
    fig.savefig(svg_path, format='svg')
    plt.close(fig)
    return Path(svg_path)


def plot_tracking_heatmap(records: Sequence[SweepRecord], svg_path: Union[str, Path]) -> Optional[Path]:
    """Largest tracking radius per (Gamma, nu) cell."""
    frame = records_frame(records).dropna(subset=['Lambda_star'])
    if frame.empty:
        logging.warning("no tracking radii to plot")
        return None
    table = frame.pivot_table(index='gamma', columns='nu', values='Lambda_star', aggfunc='max')
    fig, ax = plt.subplots(figsize=(5, 4))
    image = ax.imshow(table.to_numpy(), origin='lower', aspect='auto', cmap='viridis')
    ax.set_xticks(range(len(table.columns)))
    ax.set_xticklabels([f"{nu:g}" for nu in table.columns])
    ax.set_yticks(range(len(table.index)))
    ax.set_yticklabels([f"{g:.3g}" for g in table.index])
    for (row, column), value in np.ndenumerate(table.to_numpy()):
        if np.isfinite(value):
            ax.text(column, row, f"{value:.1f}", ha='center', va='center', color='w', fontsize='small')
    ax.set_xlabel(r'$\nu$')
    ax.set_ylabel(r'$\Gamma$')
    ax.set_title('Tracking radius')
    fig.colorbar(image, ax=ax)
    fig.tight_layout()
    fig.savefig(svg_path, format='svg')
    plt.close(fig)
    return Path(svg_path)


def emit_outputs(records: Sequence[SweepRecord], out_dir: Union[str, Path],
                 formats: Sequence[str] = FORMATS) -> List[Path]:
    """
    :param records: sweep records
    :param out_dir: output directory; contour text files are looked up in its contours/ subdirectory
    :param formats: any of 'csv', 'json', 'svg'
    :return: the files written
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if 'csv' in formats:
        written.append(write_csv(records, out / CSV_NAME))
    if 'json' in formats:
        written.append(write_records_json(records, out / JSON_NAME))
    if 'svg' in formats:
        figures = out / 'figures'
        figures.mkdir(exist_ok=True)
        for record in records:
            contour_file = out / CONTOUR_DIR / f"{record.key}.txt"
            if record.ok and contour_file.is_file():
                title = f"Gamma={record.gamma:.4g} nu={record.nu:.4g} v+={record.v_plus:.4g} winding={record.winding}"
                written.append(plot_contour(contour_file, figures / f"{record.key}.svg", title))
        written.append(plot_iso_mach(figures / 'iso_mach.svg', records=records))
        heatmap = plot_tracking_heatmap(records, figures / 'tracking_heatmap.svg')
        if heatmap is not None:
            written.append(heatmap)
    logging.info(f"wrote {len(written)} output files to {out}")
    return written
