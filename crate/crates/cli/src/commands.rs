use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use dirac::{
    assemble_flat_torus, assemble_round_sphere, check_eigenvalue_bound, compute_spectrum,
    SpinStructureTorus,
};
use immersion::ImmersionConfig;
use plucker::{
    order_h, plucker_verify, weierstrass_gaps, willmore_lower_bound, wronskian_roots,
    riemann_roch_index_check, AnalyticSection, LinearSystemH,
};
use spectral_curve::{
    branch_detect, energy_area_bound, scan_traces, small_energy_verdict, HarmonicConfig,
    SurfaceKind,
};
use surface_domain::{Domain, DomainConfig};

use crate::plot::SvgPlot;
use crate::report::{fmt17, parse_json, read_input, write_atomic, write_json};

const BOUND_SLACK: f64 = 0.05;

#[derive(Serialize)]
struct DiracReport {
    config_hash: String,
    spin: (f64, f64),
    k: usize,
    cluster_tol: f64,
    bound_slack: f64,
    area: f64,
    genus: u32,
    hermiticity_residual: f64,
    clusters: Vec<ClusterRow>,
    all_pass: bool,
}

#[derive(Serialize)]
struct ClusterRow {
    lambda: f64,
    mult_quat: usize,
    complex_count: usize,
    lhs: f64,
    rhs: f64,
    margin: f64,
    pass: bool,
}

pub fn run_dirac(
    domain_path: &Path,
    spin: &str,
    k: usize,
    cluster_tol: f64,
    out: &Path,
    plot: bool,
) -> Result<bool> {
    let (text, hash) = read_input(domain_path)?;
    let cfg: DomainConfig = parse_json(&text, "domain config")?;
    let domain = cfg.build()?;
    let (e1, e2) = parse_pair(spin).context("cannot parse --spin as e1,e2")?;
    let dm = match &domain {
        Domain::Torus(t) => {
            let eps = SpinStructureTorus {
                eps1: phase_flag(e1)?,
                eps2: phase_flag(e2)?,
            };
            assemble_flat_torus(t, eps)?
        }
        Domain::Sphere(s) => assemble_round_sphere(s),
    };
    let spectrum = compute_spectrum(&dm, k, cluster_tol)?;
    let rows = check_eigenvalue_bound(&spectrum, dm.area, dm.genus, BOUND_SLACK);
    let clusters: Vec<ClusterRow> = spectrum
        .clusters
        .iter()
        .zip(&rows)
        .map(|(c, r)| ClusterRow {
            lambda: c.lambda,
            mult_quat: c.mult_quat,
            complex_count: c.complex_count,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            pass: r.pass,
        })
        .collect();
    let all_pass = clusters.iter().all(|c| c.pass);
    let report = DiracReport {
        config_hash: hash,
        spin: (e1, e2),
        k,
        cluster_tol,
        bound_slack: BOUND_SLACK,
        area: dm.area,
        genus: dm.genus,
        hermiticity_residual: dm.hermiticity_residual(),
        clusters,
        all_pass,
    };
    write_json(out, "report.json", &report)?;
    // CSV projection: lambda, mult_quat, lhs, rhs, margin, pass
    let mut csv = String::from("lambda,mult_quat,lhs,rhs,margin,pass\n");
    for c in &report.clusters {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt17(c.lambda),
            c.mult_quat,
            fmt17(c.lhs),
            fmt17(c.rhs),
            fmt17(c.margin),
            c.pass
        ));
    }
    write_atomic(out, "spectrum.csv", csv.as_bytes())?;
    if plot {
        let lam: Vec<(f64, f64)> = report
            .clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i as f64, c.lambda))
            .collect();
        let margins: Vec<(f64, f64)> = report
            .clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i as f64, c.margin))
            .collect();
        let svg = SvgPlot::new("Dirac spectrum clusters and bound margins")
            .series("lambda", lam)
            .series("margin", margins)
            .render();
        write_atomic(out, "spectrum.svg", svg.as_bytes())?;
    }
    Ok(report.all_pass)
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("expected two comma-separated values, got `{s}`");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

fn phase_flag(e: f64) -> Result<bool> {
    if e == 0.0 {
        Ok(false)
    } else if (e - 0.5).abs() < 1e-12 {
        Ok(true)
    } else {
        bail!("spin phases must be 0 or 0.5, got {e}")
    }
}

#[derive(Serialize)]
struct WillmoreReport {
    config_hash: String,
    willmore_curvature: f64,
    willmore_hopf: f64,
    relative_gap: f64,
    conformality_residual: f64,
    area: f64,
    closed: bool,
    all_pass: bool,
}

pub fn run_willmore(input: &Path, out: &Path, plot: bool) -> Result<bool> {
    let (text, hash) = read_input(input)?;
    let cfg: ImmersionConfig = parse_json(&text, "immersion config")?;
    let data = cfg.build()?;
    let (w_curv, w_hopf) = immersion::willmore_integrals_over_cell(&data);
    let scale = w_curv.abs().max(1.0);
    let relative_gap = (w_curv - w_hopf).abs() / scale;
    let area: f64 = (0..data.domain.node_count())
        .map(|i| data.metric_density[i] * data.domain.cell_area(i))
        .sum();
    let report = WillmoreReport {
        config_hash: hash,
        willmore_curvature: w_curv,
        willmore_hopf: w_hopf,
        relative_gap,
        conformality_residual: data.conformality_residual,
        area,
        closed: data.closed,
        all_pass: relative_gap < 0.005,
    };
    write_json(out, "report.json", &report)?;
    if plot {
        let density: Vec<(f64, f64)> = (0..data.domain.node_count())
            .map(|i| {
                (
                    i as f64,
                    (data.mean_curvature[i].powi(2) - data.gauss_curvature[i])
                        * data.metric_density[i],
                )
            })
            .collect();
        let svg = SvgPlot::new("Willmore integrand per sample")
            .series("(H^2-K)|df|^2", density)
            .render();
        write_atomic(out, "willmore.svg", svg.as_bytes())?;
    }
    Ok(report.all_pass)
}

#[derive(Deserialize)]
struct SystemConfig {
    bundle_degree: i64,
    genus: u32,
    basis: Vec<SectionCoeffs>,
    #[serde(default)]
    w: f64,
    #[serde(default)]
    wstar: f64,
}

#[derive(Deserialize)]
struct SectionCoeffs {
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct PluckerReport {
    config_hash: String,
    n: i64,
    bundle_degree: i64,
    genus: u32,
    points: Vec<PointRow>,
    ord_h: u64,
    /// lower bound on ord H when candidate coverage cannot be certified
    ord_is_lower_bound: bool,
    residual: f64,
    willmore_lower_bound: f64,
    all_pass: bool,
}

#[derive(Serialize)]
struct PointRow {
    chart: usize,
    z_re: f64,
    z_im: f64,
    gaps: Vec<usize>,
    order: usize,
}

pub fn run_plucker(system: &Path, points: &str, out: &Path, plot: bool) -> Result<bool> {
    let (text, hash) = read_input(system)?;
    let cfg: SystemConfig = parse_json(&text, "linear system")?;
    if cfg.basis.is_empty() {
        bail!("linear system needs at least one section");
    }
    let degree_cap = cfg
        .basis
        .iter()
        .map(|s| s.coeffs.len().saturating_sub(1))
        .max()
        .unwrap_or(0);
    if cfg.bundle_degree < degree_cap as i64 {
        bail!(
            "bundle degree {} below the maximal coefficient degree {degree_cap}",
            cfg.bundle_degree
        );
    }
    let basis: Vec<AnalyticSection> = cfg
        .basis
        .iter()
        .map(|s| {
            let coeffs: Vec<Complex64> =
                s.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
            AnalyticSection::cp1_polynomial(&coeffs, cfg.bundle_degree as u32)
        })
        .collect();
    let sys = LinearSystemH {
        basis,
        bundle_degree: cfg.bundle_degree,
        genus: cfg.genus,
    };
    let (candidates, certified) = gather_candidates(&sys, points)?;
    let mut rows = Vec::new();
    for &p in &candidates {
        let g = weierstrass_gaps(&sys, p)?;
        rows.push(PointRow {
            chart: p.chart,
            z_re: p.z.re,
            z_im: p.z.im,
            gaps: g.gaps,
            order: g.order_at_p,
        });
    }
    let ord = order_h(&sys, &candidates)? as u64;
    let n = sys.dimension_n() as i64;
    let residual = plucker_verify(cfg.bundle_degree, cfg.genus, n, ord, cfg.w, cfg.wstar);
    let bound = willmore_lower_bound(n, cfg.bundle_degree, cfg.genus);
    let exact_case = cfg.w == 0.0 && cfg.wstar == 0.0;
    let all_pass = if exact_case {
        residual == 0.0
    } else {
        residual.abs() < 1e-8
    } && cfg.w >= bound - 1e-9;
    let report = PluckerReport {
        config_hash: hash,
        n,
        bundle_degree: cfg.bundle_degree,
        genus: cfg.genus,
        points: rows,
        ord_h: ord,
        ord_is_lower_bound: !certified,
        residual,
        willmore_lower_bound: bound,
        all_pass,
    };
    write_json(out, "report.json", &report)?;
    if plot {
        let pts: Vec<(f64, f64)> = report
            .points
            .iter()
            .map(|p| (p.z_re, p.order as f64))
            .collect();
        let svg = SvgPlot::new("Weierstrass orders over candidate points")
            .series("ord_p H", pts)
            .render();
        write_atomic(out, "orders.svg", svg.as_bytes())?;
    }
    Ok(report.all_pass)
}

/// Candidate Weierstrass points: Wronskian roots on both charts plus the
/// two chart origins, deduplicated on the projective line. Returns whether
/// coverage is certified (it is for polynomial systems via the Wronskian).
fn gather_candidates(
    sys: &LinearSystemH,
    points: &str,
) -> Result<(Vec<plucker::gaps_point::ChartPoint>, bool)> {
    use plucker::gaps_point::ChartPoint;
    if points.trim() != "auto" {
        let list: Vec<[f64; 3]> =
            serde_json::from_str(points).context("cannot parse --points JSON list")?;
        let pts = list
            .iter()
            .map(|p| ChartPoint {
                chart: p[0] as usize,
                z: Complex64::new(p[1], p[2]),
            })
            .collect();
        return Ok((pts, false));
    }
    let mut reps: Vec<Complex64> = Vec::new(); // chart-0 coordinates
    let mut has_infinity = true; // always include the point at infinity
    for root in wronskian_roots(sys, 0)? {
        reps.push(root);
    }
    for root in wronskian_roots(sys, 1)? {
        if root.norm() < 1e-12 {
            has_infinity = true;
        } else {
            reps.push(1.0 / root);
        }
    }
    reps.push(Complex64::new(0.0, 0.0));
    // dedupe on CP^1
    reps.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    reps.dedup_by(|a, b| (*a - *b).norm() < 1e-7 * (1.0 + a.norm()));
    let mut out: Vec<ChartPoint> = reps
        .into_iter()
        .map(|z| {
            if z.norm() <= 1.0 {
                ChartPoint { chart: 0, z }
            } else {
                ChartPoint {
                    chart: 1,
                    z: 1.0 / z,
                }
            }
        })
        .collect();
    if has_infinity {
        out.push(ChartPoint {
            chart: 1,
            z: Complex64::new(0.0, 0.0),
        });
    }
    Ok((out, true))
}

#[derive(Serialize)]
struct SpectralReport {
    config_hash: String,
    annulus: (f64, f64),
    grid: usize,
    branch_points: Vec<spectral_curve::BranchPoint>,
    genus: usize,
    flagged: Vec<(f64, f64, String)>,
    energy: f64,
    willmore: f64,
    degree: i64,
    bounds: BoundsBlock,
    verdict: spectral_curve::Verdict,
    invariants: InvariantsBlock,
    all_pass: bool,
}

#[derive(Serialize)]
struct BoundsBlock {
    harmonic_threshold: f64,
    harmonic_pass: bool,
    cmc_threshold: f64,
    cmc_area_pass: bool,
}

#[derive(Serialize)]
struct InvariantsBlock {
    max_det_defect: f64,
    max_commutator: f64,
    unitarity_on_circle: f64,
    symmetry_residual: f64,
    cauchy_riemann: f64,
}

pub fn run_spectral_genus(
    input: &Path,
    annulus: &str,
    grid: usize,
    out: &Path,
    plot: bool,
) -> Result<bool> {
    let (text, hash) = read_input(input)?;
    let cfg: HarmonicConfig = parse_json(&text, "harmonic data")?;
    let data = cfg.build()?;
    let (r0, r1) = parse_pair(annulus).context("cannot parse --annulus as a,b")?;
    if !(r0 > 0.0 && r1 > r0) {
        bail!("annulus must satisfy 0 < a < b");
    }
    let scan = scan_traces(&data, (r0, r1), grid)?;
    let summary = branch_detect(&data, &scan)?;
    let energy = data.energy_report()?;
    let invariants = scan_invariants(&scan);
    let harmonic_threshold = energy_area_bound(summary.genus, SurfaceKind::Harmonic);
    let cmc_threshold = energy_area_bound(summary.genus, SurfaceKind::Cmc);
    let verdict = small_energy_verdict(energy.energy, &summary);
    let bounds = BoundsBlock {
        harmonic_threshold,
        harmonic_pass: energy.energy >= harmonic_threshold * (1.0 - 1e-9) - 1e-9,
        cmc_threshold,
        // for CMC-one data the area equals the Willmore energy of the
        // Kbar part
        cmc_area_pass: energy.willmore >= cmc_threshold * (1.0 - 1e-9) - 1e-9,
    };
    let all_pass = bounds.harmonic_pass
        && bounds.cmc_area_pass
        && verdict != spectral_curve::Verdict::Contradiction
        && summary.flagged.is_empty()
        && invariants.max_det_defect < 1e-8
        && invariants.max_commutator < 1e-6
        && invariants.unitarity_on_circle < 1e-6
        && invariants.symmetry_residual < 1e-6;
    let report = SpectralReport {
        config_hash: hash,
        annulus: (r0, r1),
        grid,
        branch_points: summary.branch_points.clone(),
        genus: summary.genus,
        flagged: summary.flagged.clone(),
        energy: energy.energy,
        willmore: energy.willmore,
        degree: energy.degree,
        bounds,
        verdict,
        invariants,
        all_pass,
    };
    write_json(out, "summary.json", &report)?;
    if plot {
        let na = scan.n_angular;
        let half = na / 2;
        let t1: Vec<(f64, f64)> = (0..scan.n_radial)
            .map(|i| {
                let s = &scan.samples[i * na + half];
                (-s.mu.norm(), s.t1.re)
            })
            .collect();
        let t2: Vec<(f64, f64)> = (0..scan.n_radial)
            .map(|i| {
                let s = &scan.samples[i * na + half];
                (-s.mu.norm(), s.t2.re)
            })
            .collect();
        let svg = SvgPlot::new("holonomy traces along the negative real axis")
            .series("Re t1", t1)
            .series("Re t2", t2)
            .render();
        write_atomic(out, "traces.svg", svg.as_bytes())?;
    }
    Ok(report.all_pass)
}

fn scan_invariants(scan: &spectral_curve::TraceScan) -> InvariantsBlock {
    let (nr, na) = (scan.n_radial, scan.n_angular);
    let mut det = 0.0f64;
    let mut comm = 0.0f64;
    for s in &scan.samples {
        det = det.max(s.det_defect);
        comm = comm.max(s.commutator);
    }
    // unit-circle ring: the log-radial grid of a symmetric annulus hits
    // |mu| = 1 at the middle index when the radial count is odd
    let mut unit = 0.0f64;
    let mid = nr / 2;
    for j in 0..na {
        let s = &scan.samples[mid * na + j];
        if (s.mu.norm() - 1.0).abs() < 1e-9 {
            for h in [s.h1, s.h2] {
                let hh = [
                    h[0] * h[0].conj() + h[1] * h[1].conj(),
                    h[0] * h[2].conj() + h[1] * h[3].conj(),
                    h[2] * h[0].conj() + h[3] * h[1].conj(),
                    h[2] * h[2].conj() + h[3] * h[3].conj(),
                ];
                let defect = ((hh[0] - 1.0).norm_sqr()
                    + hh[1].norm_sqr()
                    + hh[2].norm_sqr()
                    + (hh[3] - 1.0).norm_sqr())
                .sqrt();
                unit = unit.max(defect);
            }
        }
    }
    // symmetry mu -> 1/conj(mu): radial mirror, angle negated
    let mut sym = 0.0f64;
    for i in 0..nr {
        for j in 0..na {
            let s = &scan.samples[i * na + j];
            let partner = &scan.samples[(nr - 1 - i) * na + ((na - j) % na)];
            for (h, hp) in [(s.h1, partner.h1), (s.h2, partner.h2)] {
                // J H J^{-1} with J v = C conj(v), C = [[0,-1],[1,0]]
                let transported = [h[3].conj(), -h[2].conj(), -h[1].conj(), h[0].conj()];
                let d = (0..4)
                    .map(|m| (hp[m] - transported[m]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                sym = sym.max(d);
            }
        }
    }
    InvariantsBlock {
        max_det_defect: det,
        max_commutator: comm,
        unitarity_on_circle: unit,
        symmetry_residual: sym,
        cauchy_riemann: scan.cauchy_riemann_residual(),
    }
}

#[derive(Serialize)]
struct RiemannRochReport {
    config_hash: String,
    rows: Vec<IndexRow>,
    all_pass: bool,
}

#[derive(Serialize)]
struct IndexRow {
    q_re: f64,
    q_im: f64,
    h0: usize,
    h0_adj: usize,
    index: i64,
    expected: i64,
    oracle_h0: usize,
    singular_gap: f64,
    pass: bool,
}

pub fn run_riemann_roch(domain_path: &Path, q_list: &str, out: &Path) -> Result<bool> {
    let (text, hash) = read_input(domain_path)?;
    let cfg: DomainConfig = parse_json(&text, "domain config")?;
    let Domain::Torus(torus) = cfg.build()? else {
        bail!("the Riemann-Roch check runs on a flat torus");
    };
    if torus.nx % 2 == 0 || torus.ny % 2 == 0 {
        bail!("use odd torus grids for the index check (no Nyquist kernel)");
    }
    let mut rows = Vec::new();
    for part in q_list.split(',') {
        let q: f64 = part
            .trim()
            .parse()
            .with_context(|| format!("bad q value `{part}`"))?;
        let qc = Complex64::new(q, 0.0);
        let r = riemann_roch_index_check(&torus, qc)?;
        let oracle = plucker::riemann_roch_oracle(&torus, qc);
        rows.push(IndexRow {
            q_re: q,
            q_im: 0.0,
            h0: r.h0,
            h0_adj: r.h0_adj,
            index: r.index,
            expected: r.expected,
            oracle_h0: oracle,
            pass: r.index == r.expected && r.h0 == oracle,
            singular_gap: r.singular_gap,
        });
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let report = RiemannRochReport {
        config_hash: hash,
        rows,
        all_pass,
    };
    write_json(out, "report.json", &report)?;
    Ok(all_pass)
}
