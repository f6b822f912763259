"""Command-line front end.

Every subcommand reads its parameters from the section of the same name in
an INI file (``--config``); keys not listed in the schema are rejected.
Outputs are CSV files, plus SVG plots for the spectral scan, the phase
diagram and Pruefer trajectories, written into ``--out``.

Exit codes: 0 success, 2 configuration error, 3 numeric precondition
violation, 4 I/O error.
"""

import argparse
import configparser
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds, determinant, jost, random_spectra, svg, trace_entropy
from .errors import DeltaCombError, PotentialFormatError, PreconditionError
from .lattice import is_nonresonant
from .potentials import Potential, RandomModel, random_potential, read_potential

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class ConfigError(Exception):
    pass


# -- value parsers ------------------------------------------------------------

def _float(s):
    return float(s)


def _int(s):
    return int(s)


def _floats(s):
    return [float(t) for t in s.replace(',', ' ').split()]


def _ints(s):
    return [int(t) for t in s.replace(',', ' ').split()]


def _couplings(s):
    """'1:-1, 3:0.5' -> {1: -1.0, 3: 0.5}."""
    out = {}
    for item in s.replace(',', ' ').split():
        n, v = item.split(':')
        out[int(n)] = float(v)
    return out


_POTENTIAL = {'potential': (str, None), 'couplings': (_couplings, None)}
_MODEL = {'kappa': (_float, 2.0), 'alpha_exp': (_float, 0.5),
          'coupling_a': (_float, 0.0), 'seed': (_int, 0)}

SCHEMAS = {
    'spectrum': {**_POTENTIAL, 'e_min': (_float, 0.1), 'e_max': (_float, 9.0),
                 'n_points': (_int, 200)},
    'bound-states': {**_POTENTIAL, 'p_values': (_floats, [0.5, 1.0, 1.5]),
                     'eps_max': (_float, None)},
    'lt-check': {'n_potentials': (_int, 100), 'max_support': (_int, 30),
                 'v_max': (_float, 1.9), 'p_values': (_floats, [0.5, 1.0, 1.5]),
                 'seed': (_int, 0), 'threads': (_int, 1)},
    'trace-ineq': {**_POTENTIAL, 'alpha': (_float, 1.0), 'beta': (_float, 2.0),
                   'n_quad': (_int, 40), 'cuts': (_ints, None),
                   'ensemble': (_int, 0), 'max_support': (_int, 20),
                   'v_max': (_float, 1.0), 'seed': (_int, 0),
                   'threads': (_int, 1)},
    'phase-diagram': {**_MODEL, 'lambda_min': (_float, 0.01),
                      'lambda_max': (_float, 100.0), 'n_points': (_int, 2000)},
    'prufer': {**_MODEL, 'lambda': (_float, (np.pi / 3) ** 2),
               'n_steps': (_int, 10000), 'realization': (_int, 0),
               'trials': (_int, 1), 'threads': (_int, 1)},
    'band-edges': {'coupling_a': (_float, 1.0), 'lambda_max': (_float, 300.0),
                   'alpha': (_float, None), 'beta': (_float, None)},
    'det-compare': {**_POTENTIAL, 'k_re_min': (_float, 0.2),
                    'k_re_max': (_float, 3.0), 'k_im': (_floats, [0.1, 0.5, 1.0]),
                    'n_points': (_int, 20)},
}


def load_config(path, command):
    """Parse the section for ``command`` against its schema."""
    schema = SCHEMAS[command]
    values = {k: d for k, (_, d) in schema.items()}
    base = os.getcwd()
    if path is not None:
        cp = configparser.ConfigParser(interpolation=None)
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError:
            raise
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        base = os.path.dirname(os.path.abspath(path))
        if cp.has_section(command):
            for key, raw in cp.items(command):
                if key not in schema:
                    raise ConfigError(f"[{command}] unknown key {key!r}")
                try:
                    values[key] = schema[key][0](raw)
                except ValueError as exc:
                    raise ConfigError(f"[{command}] {key} = {raw!r}: {exc}") from None
    values['_base'] = base
    return values


def _potential(cfg):
    if cfg.get('potential') and cfg.get('couplings'):
        raise ConfigError("give either 'potential' or 'couplings', not both")
    if cfg.get('potential'):
        return read_potential(os.path.join(cfg['_base'], cfg['potential']))
    if cfg.get('couplings'):
        return Potential.from_dict(cfg['couplings'])
    return Potential()


def _require(cond, field, msg):
    if not cond:
        raise PreconditionError(f"{field}: {msg}")


def _fmt(x):
    if x is None:
        return ''
    if isinstance(x, (str, bool, np.bool_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), '.17g')


def write_csv(path, header, rows):
    with open(path, 'w', newline='') as fh:
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _pool_map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- commands -----------------------------------------------------------------

def cmd_spectrum(cfg, out):
    V = _potential(cfg)
    _require(0 < cfg['e_min'] < cfg['e_max'], 'e_min/e_max', "need 0 < e_min < e_max")
    _require(cfg['n_points'] >= 2, 'n_points', "need at least 2 points")
    E = np.linspace(cfg['e_min'], cfg['e_max'], cfg['n_points'])
    bad = ~is_nonresonant(np.sqrt(E))
    _require(not bad.any(), 'e_min/e_max',
             f"grid hits E = {E[bad][0] if bad.any() else 0:g} with sqrt(E) near pi*Z")
    scan = jost.spectral_scan(V, E)
    write_csv(os.path.join(out, 'spectrum.csv'), scan.columns, scan.rows())
    svg.line_plot(os.path.join(out, 'spectrum.svg'), scan.E, scan.f,
                  'Spectral density', 'E', 'f(E)')


def cmd_bound_states(cfg, out):
    V = _potential(cfg)
    eps_max = cfg['eps_max']
    if eps_max is not None:
        _require(eps_max > 0, 'eps_max', "must be > 0")
    for p in cfg['p_values']:
        _require(p >= 0.5, 'p_values', f"p = {p} must be >= 1/2")
    E_line = determinant.line_bound_states(V, eps_max)
    E_half = bounds.halfline_eigenvalues(V, eps_max)
    hdr = ('j', 'E_j', 'eps_j')
    write_csv(os.path.join(out, 'eigenvalues_line.csv'), hdr,
              bounds.eigenvalue_rows(E_line))
    write_csv(os.path.join(out, 'eigenvalues_halfline.csv'), hdr,
              bounds.eigenvalue_rows(E_half))
    write_csv(os.path.join(out, 'lt_bounds.csv'),
              ('p', 'sum_Ep', 'bound', 'margin', 'status'),
              [_lt_row(V, p) for p in cfg['p_values']])


def _lt_row(V, p):
    if p == 0.5:
        r = bounds.lieb_thirring_sqrt(V)
        return (p, r.sum_sqrt_E, r.half_l1, r.margin, 'ok')
    try:
        r = bounds.lieb_thirring_p(V, p)
    except PreconditionError as exc:
        return (p, None, None, None, f'skipped: {exc}')
    return (p, r.sum_Ep, r.bound, r.margin, 'ok')


def cmd_lt_check(cfg, out):
    _require(cfg['n_potentials'] >= 1, 'n_potentials', "must be >= 1")
    _require(cfg['max_support'] >= 1, 'max_support', "must be >= 1")
    _require(0 < cfg['v_max'] < 2, 'v_max', "must lie in (0, 2)")
    rng = np.random.default_rng(cfg['seed'])
    pots = [random_potential(rng, int(rng.integers(1, cfg['max_support'] + 1)),
                             cfg['v_max'], sign=-1)
            for _ in range(cfg['n_potentials'])]

    def work(V):
        return [_lt_row(V, p) for p in cfg['p_values']]

    results = _pool_map(work, pots, cfg['threads'])
    rows = [(i, *r) for i, rr in enumerate(results) for r in rr]
    write_csv(os.path.join(out, 'lt_check.csv'),
              ('instance', 'p', 'sum_Ep', 'bound', 'margin', 'status'), rows)


def cmd_trace_ineq(cfg, out):
    try:
        w = trace_entropy.WeightPoly(cfg['alpha'], cfg['beta'])
    except PreconditionError as exc:
        raise PreconditionError(f"alpha/beta: {exc}") from None
    _require(cfg['n_quad'] >= 1, 'n_quad', "must be >= 1")
    if cfg['ensemble'] > 0:
        rng = np.random.default_rng(cfg['seed'])
        pots = [random_potential(rng, int(rng.integers(1, cfg['max_support'] + 1)),
                                 cfg['v_max'])
                for _ in range(cfg['ensemble'])]
    else:
        pots = [_potential(cfg)]
    reps = _pool_map(lambda V: trace_entropy.trace_inequality_report(V, w, cfg['n_quad']),
                     pots, cfg['threads'])
    C = trace_entropy.empirical_constant(reps)
    write_csv(os.path.join(out, 'trace_summary.csv'),
              ('instance', 'z', 'fourier_term', 'det4_residual', 'empirical_C'),
              [(i, r.z, r.fourier_term, r.det4_residual, C) for i, r in enumerate(reps)])
    V0 = pots[0]
    write_csv(os.path.join(out, 'trace_nodes.csv'), ('k', 'ImM', 'log_ratio', 'p_k'),
              trace_entropy.node_dump(V0, w, cfg['n_quad']))
    cuts = cfg['cuts']
    if cuts is None:
        end = V0.support_end
        cuts = sorted({c for c in (end // 4, end // 2, 3 * end // 4) if c > 0} | {end})
    rows, zV, _ = trace_entropy.semicontinuity_probe(V0, w, cuts, cfg['n_quad'])
    write_csv(os.path.join(out, 'semicontinuity.csv'), ('n_cut', 'Z', 'Z_V_below'),
              [(c, z, zV <= z + 1e-6) for c, z in rows])


def _model(cfg):
    try:
        return RandomModel(cfg['kappa'], cfg['alpha_exp'], cfg['coupling_a'], cfg['seed'])
    except PreconditionError as exc:
        raise PreconditionError(f"model: {exc}") from None


def cmd_phase_diagram(cfg, out):
    _model(cfg)
    lo, hi, n = cfg['lambda_min'], cfg['lambda_max'], cfg['n_points']
    _require(lo < hi, 'lambda_min/lambda_max', "need lambda_min < lambda_max")
    _require(n >= 2, 'n_points', "need at least 2 points")
    lam = np.linspace(lo, hi, n)
    rows = []
    for l in lam:
        dp = random_spectra.dispersion_point(l, cfg['coupling_a'])
        cls = random_spectra.classify_point(l, cfg['coupling_a'], cfg['kappa'],
                                            cfg['alpha_exp'])
        p = (random_spectra.decay_exponent(l, cfg['coupling_a'], cfg['kappa'])
             if dp.tilde_k is not None else None)
        rows.append((l, dp.gamma, dp.tilde_k, p, cls))
    write_csv(os.path.join(out, 'phase_diagram.csv'),
              ('lambda', 'gamma', 'tilde_k', 'p', 'class'), rows)
    segs = []
    half = 0.5 * (lam[1] - lam[0])
    for l, *_, cls in rows:
        if segs and segs[-1][2] == cls:
            segs[-1][1] = l + half
        else:
            segs.append([l - half, l + half, cls])
    svg.band_plot(os.path.join(out, 'phase_diagram.svg'), segs, (lo - half, hi + half),
                  f"a = {cfg['coupling_a']:g}, kappa = {cfg['kappa']:g}, "
                  f"alpha = {cfg['alpha_exp']:g}")


def cmd_prufer(cfg, out):
    model = _model(cfg)
    _require(cfg['n_steps'] >= 2, 'n_steps', "must be >= 2")
    _require(cfg['trials'] >= 1, 'trials', "must be >= 1")
    lam = cfg['lambda']
    g = random_spectra.discriminant(lam, model.coupling_a)
    _require(abs(g) < 2, 'lambda', f"|gamma| = {abs(g):.6g} is not < 2")
    tr = random_spectra.prufer_flow(model, lam, cfg['n_steps'], cfg['realization'])
    write_csv(os.path.join(out, 'prufer.csv'), ('n', 'logR2', 'theta'),
              zip(tr.n, tr.logR2, tr.theta))
    svg.line_plot(os.path.join(out, 'prufer.svg'), np.log(tr.n), tr.logR2,
                  'Pruefer amplitude', 'log n', 'log R(n)^2')
    if cfg['trials'] > 1:
        cps = np.unique(np.geomspace(1, cfg['n_steps'], 30).astype(int))
        idx = list(range(cfg['trials']))
        chunks = [idx[i::cfg['threads']] for i in range(max(cfg['threads'], 1))]
        chunks = [c for c in chunks if c]
        parts = _pool_map(lambda c: random_spectra.prufer_ensemble(
            model, lam, cfg['n_steps'], c, cps), chunks, cfg['threads'])
        data = np.zeros((len(cps), cfg['trials']))
        for c, part in zip(chunks, parts):
            data[:, c] = part
        write_csv(os.path.join(out, 'prufer_ensemble.csv'),
                  ('n', 'mean_logR2', 'std_logR2'),
                  zip(cps, data.mean(axis=1), data.std(axis=1)))


def cmd_band_edges(cfg, out):
    _require(cfg['lambda_max'] > 0, 'lambda_max', "must be > 0")
    a = cfg['coupling_a']
    bands = random_spectra.band_edges(a, cfg['lambda_max'])
    rows = [('band', lo, hi) for lo, hi in bands]
    rows += [('gap', lo, hi) for lo, hi in random_spectra.gaps_from_bands(bands)]
    if cfg['alpha'] is not None or cfg['beta'] is not None:
        _require(cfg['alpha'] is not None and cfg['beta'] is not None,
                 'alpha/beta', "give both or neither")
        rows += [('k_region', lo, hi) for lo, hi in
                 random_spectra.k_region(a, cfg['alpha'], cfg['beta'], cfg['lambda_max'])]
    write_csv(os.path.join(out, 'band_edges.csv'), ('kind', 'lo', 'hi'), rows)


def cmd_det_compare(cfg, out):
    V = _potential(cfg)
    _require(cfg['n_points'] >= 1, 'n_points', "must be >= 1")
    _require(all(t > 0 for t in cfg['k_im']), 'k_im', "values must be > 0")
    kr = np.linspace(cfg['k_re_min'], cfg['k_re_max'], cfg['n_points'])
    k = (kr[None, :] + 1j * np.asarray(cfg['k_im'])[:, None]).ravel()
    a = jost.jost_coefficients(V, k)[0]
    L = determinant.perturbation_det(V, k)
    rel = np.abs(a - L) / np.abs(L)
    write_csv(os.path.join(out, 'det_compare.csv'),
              ('k_re', 'k_im', 'a_re', 'a_im', 'L_re', 'L_im', 'rel_err'),
              zip(k.real, k.imag, a.real, a.imag, L.real, L.imag, rel))


COMMANDS = {
    'spectrum': cmd_spectrum, 'bound-states': cmd_bound_states,
    'lt-check': cmd_lt_check, 'trace-ineq': cmd_trace_ineq,
    'phase-diagram': cmd_phase_diagram, 'prufer': cmd_prufer,
    'band-edges': cmd_band_edges, 'det-compare': cmd_det_compare,
}


def build_parser():
    ap = argparse.ArgumentParser(prog='deltacomb', description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument('--config', metavar='PATH')
        sp.add_argument('--out', metavar='DIR', default='.')
        sp.add_argument('--seed', type=int, metavar='N')
        sp.add_argument('--threads', type=int, metavar='N')
    return ap


def run(argv=None):
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config, args.command)
    if args.seed is not None:
        if 'seed' not in SCHEMAS[args.command]:
            raise ConfigError(f"{args.command} takes no seed")
        cfg['seed'] = args.seed
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        cfg['threads'] = args.threads
    cfg.setdefault('threads', 1)
    os.makedirs(args.out, exist_ok=True)
    COMMANDS[args.command](cfg, args.out)


def main(argv=None):
    try:
        run(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PotentialFormatError as exc:
        print(f"potential file: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DeltaCombError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
