use std::time::{Instant, SystemTime, UNIX_EPOCH};

use qtoeplitz::bergman::{
    berezin, berezin_range_scan, interior_points, monomial_value, BasisShape, MonomialBasis, QuadratureOrders,
    Weight,
};
use qtoeplitz::groups::{complete_character_table, one_dim_characters, smith_normal_form, GroupKind, IntMatrix};
use qtoeplitz::isotypic::{completeness_defect, project, relative_invariance_residual};
use qtoeplitz::poly::{
    compose_symbol, exponents_of_degree, exponents_up_to_degree, invariant_dimension, MixedSymbol, MultiPoly,
};
use qtoeplitz::quotient::{
    block_structure, compressed_toeplitz, isotypic_basis, kernel_identity_residual, lemma_pr_residual,
    quotient_toeplitz_quadrature, symmetrized_volume, transfer_check, QuotientDescriptor, TransferMode,
    TransferReport,
};
use qtoeplitz::Complex64;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::formats::{pair, points_from_json};
use crate::report::{Batch, CharacterRow, Check, FullSpace, Report, Role};
use crate::ConfigError;

/// Failure to run an experiment at all, as opposed to a failed check.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Compute(#[from] qtoeplitz::Error),
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut r = Report::new(cfg.label(), cfg.kind.name(), cfg.expect);
    if cfg.group.is_some() || matches!(cfg.kind, ExperimentKind::TransferProduct | ExperimentKind::TransferCommute) {
        r.group = Some(cfg.group_spec().name());
    }
    if let Some(w) = cfg.tolerance_warning() {
        r.warnings.push(w);
    }
    match cfg.kind {
        ExperimentKind::CstDimensions => cst_dimensions(cfg, &mut r)?,
        ExperimentKind::Decompose => decompose(cfg, &mut r)?,
        ExperimentKind::TransferProduct => transfer(cfg, &mut r, TransferMode::Product)?,
        ExperimentKind::TransferCommute => transfer(cfg, &mut r, TransferMode::Commutator)?,
        ExperimentKind::LemmaPr => lemma_pr(cfg, &mut r)?,
        ExperimentKind::KernelCheck => kernel_check(cfg, &mut r)?,
        ExperimentKind::Berezin => berezin_suite(cfg, &mut r)?,
        ExperimentKind::Intertwining => intertwining(cfg, &mut r)?,
        ExperimentKind::BlockStructure => blocks(cfg, &mut r)?,
        ExperimentKind::Volume => volume(cfg, &mut r)?,
        ExperimentKind::Snf => snf(cfg, &mut r)?,
    }
    r.finalize();
    r.metadata.wall_time_s = start.elapsed().as_secs_f64();
    r.metadata.timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(r)
}

/// Runs every experiment in parallel; reports keep the input order.
pub fn run_batch(cfgs: &[ExperimentConfig]) -> Result<Batch, RunError> {
    for c in cfgs {
        c.validate()?;
    }
    let reports = cfgs.par_iter().map(run_experiment).collect::<Result<Vec<_>, _>>()?;
    Ok(Batch::new(reports))
}

fn partitions(n: usize, parts: usize, max_part: usize) -> usize {
    if n == 0 {
        return 1;
    }
    if parts == 0 {
        return 0;
    }
    (1..=n.min(max_part)).map(|k| partitions(n - k, parts - 1, k)).sum()
}

fn cst_dimensions(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let g = cfg.group()?;
    let n = cfg.truncation();
    let mut dims = Vec::new();
    for k in 0..=n {
        let got = invariant_dimension(&g, k);
        let want = match g.kind() {
            GroupKind::Symmetric { degree } => partitions(k, *degree, k),
            GroupKind::AbelianDiagonal { orders } => exponents_of_degree(g.dim(), k)
                .iter()
                .filter(|e| orders.iter().enumerate().all(|(i, &m)| e.get(i) % m == 0))
                .count(),
            GroupKind::Custom => {
                return Err(ConfigError::new("cst-dimensions needs a symmetric or diagonal group").into());
            }
        };
        dims.push(got);
        r.push(Check::identity(format!("degree {k}"), got.abs_diff(want) as f64, cfg.tolerance()));
    }
    r.detail("invariant_dimensions", dims);
    Ok(())
}

fn decompose(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let g = cfg.group()?;
    let w = cfg.weight()?;
    let n = cfg.truncation();
    let tol = cfg.tolerance();
    let table = complete_character_table(&g)?;
    let monos: Vec<MultiPoly> = exponents_up_to_degree(g.dim(), n)
        .into_iter()
        .map(|m| MultiPoly::monomial(m, Complex64::new(1.0, 0.0)))
        .collect();
    let projected: Vec<Vec<MultiPoly>> =
        table.iter().map(|chi| monos.iter().map(|f| project(&g, chi, f)).collect()).collect();
    let index = exponents_up_to_degree(g.dim(), n).into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut sizes = serde_json::Map::new();
    for (ci, chi) in table.iter().enumerate() {
        let label = chi.label().to_string();
        let idem = projected[ci]
            .iter()
            .map(|p| (&project(&g, chi, p) - p).max_abs_coeff())
            .fold(0.0, f64::max);
        r.push(Check::identity(format!("idempotent[{label}]"), idem, tol));
        let adj = monos
            .iter()
            .enumerate()
            .flat_map(|(i, f)| {
                let (w, projected, monos) = (&w, &projected, &monos);
                monos.iter().enumerate().map(move |(j, h)| {
                    (w.inner(&projected[ci][i], h) - w.inner(f, &projected[ci][j])).norm()
                })
            })
            .fold(0.0, f64::max);
        r.push(Check::identity(format!("self-adjoint[{label}]"), adj, tol));
        if chi.degree() == 1 {
            let rel = projected[ci].iter().map(|p| relative_invariance_residual(&g, chi, p)).fold(0.0, f64::max);
            r.push(Check::identity(format!("relative-invariant[{label}]"), rel, tol.max(1e-10)));
        }
        let orth = table[ci + 1..]
            .iter()
            .flat_map(|other| { let g = &g; projected[ci].iter().map(move |p| project(g, other, p).max_abs_coeff()) })
            .fold(0.0, f64::max);
        if ci + 1 < table.len() {
            r.push(Check::identity(format!("orthogonal[{label}]"), orth, tol));
        }
        let rank = qtoeplitz::linalg::rank(
            &qtoeplitz::linalg::dense_from_rows(
                &projected[ci]
                    .iter()
                    .map(|p| p.coefficients_on(&index, monos.len()).0)
                    .collect::<Vec<_>>(),
            ),
            1e-10,
        );
        sizes.insert(label, rank.into());
    }
    r.push(Check::identity("completeness", completeness_defect(&g, n)?, tol));
    r.detail("component_dimensions", sizes);
    Ok(())
}

fn transfer_rows(r: &mut Report, t: &TransferReport, tol: f64) {
    for c in &t.characters {
        r.push(Check::identity(format!("character[{}]", c.label), c.residual, tol));
    }
    r.push(Check::identity("full-space", t.full_space_residual, tol));
    r.push(Check::condition("joint_consistent", t.joint_consistent));
    r.characters = Some(
        t.characters.iter().map(|c| CharacterRow { label: c.label.to_string(), residual: c.residual, pass: c.pass }).collect(),
    );
    r.full_space = Some(FullSpace { residual: t.full_space_residual, pass: t.full_space_pass });
    r.joint_consistent = Some(t.joint_consistent);
    r.detail("margin", t.margin);
    r.detail("truncation", t.truncation);
}

fn transfer(cfg: &ExperimentConfig, r: &mut Report, mode: TransferMode) -> Result<(), RunError> {
    let g = cfg.group()?;
    let w = cfg.weight()?;
    let u = cfg.require_symbol("u")?;
    let v = cfg.require_symbol("v")?;
    let q = match mode {
        TransferMode::Product => Some(cfg.symbol("q")?.unwrap_or_else(|| &u * &v)),
        TransferMode::Commutator => None,
    };
    let t = transfer_check(&g, &w, &u, &v, q.as_ref(), mode, cfg.truncation())?;
    transfer_rows(r, &t, cfg.tolerance());
    Ok(())
}

fn holomorphic(cfg: &ExperimentConfig, key: &str) -> Result<MultiPoly, RunError> {
    match cfg.symbol(key)? {
        None => Ok(MultiPoly::zero(cfg.dim())),
        Some(s) if s.is_holomorphic() => Ok(s.holomorphic_part()),
        Some(_) => Err(ConfigError::new(format!("lemma-pr: '{key}' must be holomorphic")).into()),
    }
}

fn sample_points(cfg: &ExperimentConfig, w: &Weight, count: usize, radius: f64) -> Result<Vec<Vec<Complex64>>, RunError> {
    if cfg.points.is_empty() {
        Ok(interior_points(w, count, radius))
    } else {
        let pts = points_from_json(&cfg.points, cfg.dim())?;
        for p in &pts {
            w.check_interior(p)?;
        }
        Ok(pts)
    }
}

fn lemma_pr(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let w = cfg.weight()?;
    let (f1, f2, g1, g2) = (holomorphic(cfg, "f1")?, holomorphic(cfg, "f2")?, holomorphic(cfg, "g1")?, holomorphic(cfg, "g2")?);
    let h = cfg.require_symbol("h")?;
    let points = if cfg.points.is_empty() {
        let mut p = vec![vec![Complex64::new(0.0, 0.0); cfg.dim()]];
        p.extend(interior_points(&w, 4, 0.6));
        p
    } else {
        sample_points(cfg, &w, 0, 0.0)?
    };
    let orders = cfg.orders_or(QuadratureOrders::new(32, 64));
    let rep = lemma_pr_residual(&f1, &f2, &g1, &g2, &h, &w, &points, orders, cfg.truncation())?;
    let op = Check::identity("operator", rep.operator_residual, cfg.tolerance());
    let bz = Check::new("berezin", Role::Identity, rep.berezin_residual(), 1e-6, rep.accuracy_warning);
    let agree = op.status.passed() == bz.status.passed();
    r.push(op);
    r.push(bz);
    r.push(Check::condition("indicators_agree", agree));
    r.detail("point_residuals", &rep.point_residuals);
    r.detail("points", points.iter().map(|p| p.iter().copied().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>());
    if rep.accuracy_warning {
        r.warnings.push("Berezin quadrature changed by more than 1e-5 at doubled orders".into());
    }
    Ok(())
}

fn kernel_check(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let w = cfg.weight()?;
    let d = cfg.dim();
    let n = cfg.truncation();
    let tol = cfg.tolerance();
    let points = sample_points(cfg, &w, 20, 0.9)?;
    // a fixed dense test polynomial with all monomials up to degree n
    let p = MultiPoly::from_terms(
        d,
        exponents_up_to_degree(d, n)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, Complex64::new(1.0 / (1 + i) as f64, (i % 3) as f64 / 4.0))),
    );
    let shape = if w.domain() == qtoeplitz::bergman::Domain::Ball { BasisShape::Simplex } else { BasisShape::Box };
    let basis = MonomialBasis::new(d, n, shape);
    let mut worst: f64 = 0.0;
    for y in &points {
        let ky = MultiPoly::from_terms(
            d,
            basis.indices().iter().map(|m| (*m, monomial_value(m, y).conj() * w.kernel_coefficient(m))),
        );
        worst = worst.max((w.inner(&p, &ky) - p.eval(y)).norm());
    }
    r.push(Check::identity("reproducing", worst, tol));
    let series_n = match d {
        1 => 40,
        2 => 25,
        _ => 14,
    };
    let series_basis = MonomialBasis::new(d, series_n, shape);
    let near = interior_points(&w, 10, 0.5);
    let mut series: f64 = 0.0;
    for (z, y) in near.iter().zip(near.iter().rev()) {
        series = series.max((w.kernel_series(z, y, &series_basis) - w.kernel_eval(z, y)?).norm());
    }
    r.push(Check::identity(format!("series[N={series_n}]"), series, 1e-6));
    if let Some(spec) = &cfg.group {
        let g = spec.build()?;
        for chi in one_dim_characters(&g)? {
            let q = QuotientDescriptor::new(&g, &chi, &w)?;
            let qb = isotypic_basis(&q, n)?;
            let mut res: f64 = 0.0;
            for (z, y) in points.iter().zip(points.iter().rev()) {
                res = res.max(kernel_identity_residual(&q, &qb, z, y)?);
            }
            r.push(Check::identity(format!("kernel-identity[{}]", chi.label()), res, 1e-12));
        }
    }
    Ok(())
}

fn berezin_suite(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let w = cfg.weight()?;
    let orders = cfg.orders_or(QuadratureOrders::default());
    let Some(f) = cfg.symbol("f")?.or(cfg.symbol("u")?) else {
        if w.dim() != 1 || w.domain() != qtoeplitz::bergman::Domain::Polydisc {
            return Err(ConfigError::new("berezin range scan runs on the disc only").into());
        }
        let rows = berezin_range_scan(w.alpha()[0], 3, 3, orders)?;
        let table: Vec<_> = rows
            .iter()
            .map(|row| serde_json::json!({"p": row.p, "q": row.q, "residual": row.residual}))
            .collect();
        r.detail("range_scan", table);
        r.warnings.push("range scan is exploratory and asserts nothing".into());
        return Ok(());
    };
    let points = sample_points(cfg, &w, 10, 0.7)?;
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    let mut estimate: f64 = 0.0;
    let mut warned = false;
    for z in &points {
        let b = berezin(&w, &f, z, orders)?;
        warned |= b.accuracy_warning;
        estimate = estimate.max(b.error_estimate.unwrap_or(0.0));
        worst = worst.max((b.value - f.eval(z)).norm());
        values.push(pair(b.value));
    }
    if f.is_pluriharmonic() && f.terms().all(|(a, b, _)| a.degree() == 0 || b.degree() == 0) {
        r.push(Check::new("fixed-point", Role::Identity, worst, cfg.tolerance(), warned));
    }
    r.push(Check::new("quadrature-stability", Role::Consistency, estimate, qtoeplitz::bergman::BEREZIN_WARN_TOL, false));
    r.detail("values", values);
    Ok(())
}

fn theta_symbols(cfg: &ExperimentConfig) -> Result<Vec<(String, MixedSymbol)>, RunError> {
    if cfg.symbols.is_empty() {
        let d = cfg.dim();
        let w1 = MultiPoly::var(d, 0);
        let wl = MultiPoly::var(d, d - 1);
        return Ok(vec![
            ("1".into(), MixedSymbol::one(d)),
            ("w1".into(), MixedSymbol::from_holomorphic(&w1)),
            ("conj(wd)".into(), MixedSymbol::from_antiholomorphic(&wl)),
            ("w1 conj(w1)".into(), MixedSymbol::from_product(&w1, &w1)),
        ]);
    }
    cfg.symbols.keys().map(|k| Ok((k.clone(), cfg.require_symbol(k)?))).collect()
}

fn intertwining(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let g = cfg.group()?;
    let w = cfg.weight()?;
    let n = cfg.truncation();
    let orders = cfg.orders_or(QuadratureOrders::new(2 * n.max(4), 3 * n.max(4)));
    let symbols = theta_symbols(cfg)?;
    for chi in one_dim_characters(&g)? {
        let q = QuotientDescriptor::new(&g, &chi, &w)?;
        let basis = isotypic_basis(&q, n)?;
        for (name, u) in &symbols {
            let exact = compressed_toeplitz(&q, &compose_symbol(u, q.theta()), &basis)?;
            let uu = u.clone();
            let quad = quotient_toeplitz_quadrature(&q, move |t| uu.eval(t), &basis, orders)?;
            r.push(Check::identity(format!("{}[{name}]", chi.label()), exact.max_abs_diff(&quad)?, cfg.tolerance()));
        }
    }
    Ok(())
}

fn blocks(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let g = cfg.group()?;
    let w = cfg.weight()?;
    let theta = qtoeplitz::poly::basic_map(&g)?;
    for (name, u) in theta_symbols(cfg)? {
        let rep = block_structure(&g, &w, &compose_symbol(&u, &theta), cfg.truncation())?;
        r.push(Check::identity(format!("off-block[{name}]"), rep.off_block, cfg.tolerance()));
        r.detail("block_sizes", &rep.block_sizes);
        r.detail("exhaustive", rep.exhaustive);
    }
    Ok(())
}

fn volume(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let g = cfg.group()?;
    let w = cfg.weight()?;
    let v = symmetrized_volume(&g, &w, cfg.orders_or(QuadratureOrders::new(16, 32)))?;
    r.push(Check::identity("quadrature-vs-exact", (v.quadrature - v.exact).abs(), cfg.tolerance()));
    r.detail("quadrature", v.quadrature);
    r.detail("exact", v.exact);
    Ok(())
}

fn snf(cfg: &ExperimentConfig, r: &mut Report) -> Result<(), RunError> {
    let rows = cfg.matrix.as_ref().ok_or_else(|| ConfigError::new("snf: 'matrix' is required"))?;
    let a = IntMatrix::from_rows(rows).map_err(|e| ConfigError::new(format!("snf: {e}")))?;
    let s = smith_normal_form(&a)?;
    let prod = s.p.mul(&s.d)?.mul(&s.q)?;
    let unimodular = s.p.det()?.abs() == 1 && s.q.det()?.abs() == 1;
    let f = s.invariant_factors();
    let chain = f.iter().all(|&x| x > 0) && f.windows(2).all(|p| p[1] % p[0] == 0);
    r.push(Check::condition("A = PDQ", prod == a));
    r.push(Check::condition("unimodular", unimodular));
    r.push(Check::condition("divisibility", chain));
    r.detail("P", s.p.rows());
    r.detail("D", s.d.rows());
    r.detail("Q", s.q.rows());
    r.detail("invariant_factors", f);
    Ok(())
}
