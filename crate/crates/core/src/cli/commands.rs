use std::io::Write;

use rug::Float;

use super::render::Report;
use super::{Cli, Command, GlobalArgs, ProblemArgs};
use crate::error::{Error, Result};
use crate::optimizer::{
    converge_scan_with, optimize_with, real_roots, SelectionPolicy, DEFAULT_MAX_ORDER,
};
use crate::oracle::{reference_energy, ReferenceEnergy, CROSS_ORACLE_TOLERANCE};
use crate::precision::{render_float, Precision};
use crate::reexpansion::{reexpand, OscillatorSpec};
use crate::scaling::{
    build_scaling_polynomial, scaling_polynomial_via_derivative, verify_binomial_identity,
    verify_combined_identity, verify_term_identity, IdentityCheck,
};
use crate::series::cache::{CacheOutcome, CoefficientCache};
use crate::series::{check_power, format_rational, generate_bw_coefficients, BwSeries, Rational};

/// Significant digits of the labelled decimal previews of exact values.
const PREVIEW_DIGITS: usize = 20;

pub(super) fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Coeffs { p, order } => coeffs(g, *p, *order),
        Command::Polynomial { p, order } => polynomial(g, *p, *order),
        Command::Solve {
            problem,
            order,
            oracle,
        } => solve(g, problem, *order, *oracle),
        Command::Converge {
            problem,
            max_order,
            strict,
        } => converge(g, problem, *max_order, *strict),
        Command::Verify { p, max_order } => verify(g, *p, *max_order),
    }
}

fn preview(value: &Rational, prec: Precision) -> String {
    render_float(&Float::with_val(prec.bits(), value), PREVIEW_DIGITS)
}

fn check_cap(order: usize) -> Result<()> {
    if order > DEFAULT_MAX_ORDER {
        return Err(Error::InvalidSpec(format!(
            "order {order} exceeds the cap of {DEFAULT_MAX_ORDER}"
        )));
    }
    Ok(())
}

/// Coefficients through `order`, served from the cache directory when one
/// is configured. Cache events go to stderr so stdout stays reproducible.
fn series_for(g: &GlobalArgs, p: u32, order: usize) -> Result<BwSeries> {
    check_power(p)?;
    let Some(dir) = &g.cache else {
        return generate_bw_coefficients(p, order);
    };
    let cache = CoefficientCache::new(dir);
    let (series, outcome) = cache.get_or_generate(p, order)?;
    let mut err = std::io::stderr();
    match outcome {
        CacheOutcome::Hit => {}
        CacheOutcome::Miss => {
            let _ = writeln!(err, "cache: wrote {}", cache.path_for(p, 0).display());
        }
        CacheOutcome::Replaced(why) => {
            let _ = writeln!(err, "cache: replaced bad file ({why})");
        }
    }
    Ok(series)
}

fn problem_spec(problem: &ProblemArgs) -> Result<OscillatorSpec> {
    check_power(problem.p)?;
    OscillatorSpec::new(problem.p, problem.omega.clone(), problem.g.clone())
}

fn spec_params(r: &mut Report, spec: &OscillatorSpec, prec: Precision) {
    r.param("p", spec.p.to_string());
    r.param("omega", format_rational(&spec.omega));
    r.param("g", format_rational(&spec.g));
    r.param("precision_digits", prec.decimal_digits().to_string());
}

fn reference_notes(r: &mut Report, reference: &ReferenceEnergy) {
    r.note("oracle_energy", format!("{:.16e}", reference.energy()));
    r.note(
        "oracle_grid_energy",
        format!("{:.16e}", reference.grid.energy),
    );
    r.note(
        "oracle_relative_gap",
        format!("{:.3e}", reference.relative_gap),
    );
    r.note("oracle_basis_dim", reference.diag.basis_dim.to_string());
    r.note("oracle_agrees", reference.agrees().to_string());
}

fn coeffs(g: &GlobalArgs, p: u32, order: usize) -> Result<Report> {
    let prec = g.precision();
    let series = series_for(g, p, order)?;
    let mut r = Report::new("coeffs", vec!["l", "coefficient", "approx"]);
    r.param("p", p.to_string());
    r.param("order", order.to_string());
    for (l, c) in series.coeffs().iter().enumerate() {
        r.push_row(vec![l.to_string(), format_rational(c), preview(c, prec)]);
    }
    Ok(r)
}

fn polynomial(g: &GlobalArgs, p: u32, order: usize) -> Result<Report> {
    check_cap(order)?;
    let prec = g.precision();
    let series = series_for(g, p, order)?;
    let scaling = build_scaling_polynomial(&series, order)?;
    let roots = real_roots(scaling.poly(), prec)?;
    let mut r = Report::new("polynomial", vec!["item", "index", "exact", "approx"]);
    r.param("p", p.to_string());
    r.param("order", order.to_string());
    r.param("precision_digits", prec.decimal_digits().to_string());
    r.note("polynomial", scaling.poly().display_in("σ"));
    r.note(
        "degree",
        scaling
            .poly()
            .degree()
            .map_or("none".into(), |d| d.to_string()),
    );
    r.note("real_root_count", roots.len().to_string());
    for (k, c) in scaling.poly().coeffs().iter().enumerate() {
        r.push_row(vec![
            "coefficient".into(),
            k.to_string(),
            format_rational(c),
            preview(c, prec),
        ]);
    }
    for (i, root) in roots.iter().enumerate() {
        r.push_row(vec![
            "root".into(),
            i.to_string(),
            root.exact.as_ref().map(format_rational).unwrap_or_default(),
            prec.render(&root.value),
        ]);
    }
    Ok(r)
}

fn solve(g: &GlobalArgs, problem: &ProblemArgs, order: usize, with_oracle: bool) -> Result<Report> {
    let spec = problem_spec(problem)?;
    if order == 0 {
        return Err(Error::OrderTooLow);
    }
    check_cap(order)?;
    let settings = g.oracle_settings();
    let prec = g.precision();
    let series = series_for(g, spec.p, order)?;
    let result = optimize_with(&series, &spec, order, SelectionPolicy::default(), prec)?;
    let mut r = Report::new(
        "solve",
        vec![
            "rank",
            "kind",
            "sigma",
            "omega_trial",
            "energy",
            "flatness",
            "sigma_exact",
            "omega_trial_exact",
            "energy_exact",
        ],
    );
    spec_params(&mut r, &spec, prec);
    r.param("order", order.to_string());
    let chosen = &result.chosen;
    r.note("energy", prec.render(&chosen.energy));
    r.note("sigma", prec.render(&chosen.sigma));
    r.note("omega_trial", prec.render(&chosen.omega_trial));
    r.note("kind", chosen.kind.as_str());
    r.note("fallback_used", result.fallback_used.to_string());
    r.note("candidate_count", result.all_candidates.len().to_string());
    if with_oracle {
        let reference = reference_energy(&spec, &settings)?;
        let error = Float::with_val(prec.bits(), &chosen.energy - reference.energy()).abs();
        reference_notes(&mut r, &reference);
        r.note("abs_error", render_float(&error, PREVIEW_DIGITS));
        r.passed = reference.agrees();
    }
    for (rank, c) in result.all_candidates.iter().enumerate() {
        let exact = |f: fn(&crate::optimizer::ExactCandidate) -> &Rational| {
            c.exact
                .as_ref()
                .map(|e| format_rational(f(e)))
                .unwrap_or_default()
        };
        r.push_row(vec![
            rank.to_string(),
            c.kind.as_str().into(),
            prec.render(&c.sigma),
            prec.render(&c.omega_trial),
            prec.render(&c.energy),
            prec.render(&c.flatness),
            exact(|e| &e.sigma),
            exact(|e| &e.omega_trial),
            exact(|e| &e.energy),
        ]);
    }
    Ok(r)
}

fn converge(
    g: &GlobalArgs,
    problem: &ProblemArgs,
    max_order: usize,
    strict: bool,
) -> Result<Report> {
    let spec = problem_spec(problem)?;
    if max_order == 0 {
        return Err(Error::OrderTooLow);
    }
    check_cap(max_order)?;
    let settings = g.oracle_settings();
    let prec = g.precision();
    let series = series_for(g, spec.p, max_order)?;
    let reference = reference_energy(&spec, &settings)?;
    let report = converge_scan_with(&series, &spec, max_order, reference.energy(), prec)?;
    let mut r = Report::new(
        "converge",
        vec![
            "order",
            "kind",
            "sigma",
            "omega_trial",
            "energy",
            "abs_error",
        ],
    );
    spec_params(&mut r, &spec, prec);
    r.param("max_order", max_order.to_string());
    reference_notes(&mut r, &reference);
    let floor = CROSS_ORACLE_TOLERANCE * reference.energy().abs();
    let increase = report.first_odd_increase(floor);
    r.note(
        "odd_error_increase",
        increase.map_or("none".into(), |(a, b)| format!("{a}->{b}")),
    );
    if let Some(last) = report.rows.last() {
        r.note(
            "final_abs_error",
            render_float(&last.abs_error, PREVIEW_DIGITS),
        );
    }
    r.passed = reference.agrees() && !(strict && increase.is_some());
    for row in &report.rows {
        r.push_row(vec![
            row.order.to_string(),
            row.kind.as_str().into(),
            prec.render(&row.sigma),
            prec.render(&row.omega_trial),
            prec.render(&row.energy),
            render_float(&row.abs_error, PREVIEW_DIGITS),
        ]);
    }
    Ok(r)
}

fn identity_row(r: &mut Report, name: &str, check: &IdentityCheck) {
    let detail = check
        .first_offending_monomial()
        .map(|(k, c)| format!("sigma^{k} coefficient {}", format_rational(&c)))
        .unwrap_or_default();
    push_check(r, name, check.l.to_string(), check.holds(), detail);
}

fn push_check(r: &mut Report, name: &str, index: String, ok: bool, detail: String) {
    if !ok {
        r.passed = false;
    }
    r.push_row(vec![
        name.into(),
        index,
        if ok { "pass" } else { "fail" }.into(),
        detail,
    ]);
}

fn verify(g: &GlobalArgs, p: u32, max_order: usize) -> Result<Report> {
    check_power(p)?;
    if max_order == 0 {
        return Err(Error::OrderTooLow);
    }
    check_cap(max_order)?;
    let n = max_order;
    let bw = generate_bw_coefficients(p, n + 1)?;
    let series = reexpand(&bw, n)?;
    let mut r = Report::new("verify", vec!["check", "index", "status", "detail"]);
    r.param("p", p.to_string());
    r.param("max_order", n.to_string());

    for l in 0..n {
        identity_row(&mut r, "term_identity", &verify_term_identity(&series, l)?);
    }
    for l in 0..n {
        identity_row(
            &mut r,
            "combined_identity",
            &verify_combined_identity(&series, l)?,
        );
    }
    for l in 0..=n {
        for j in 0..=l {
            let b = verify_binomial_identity(p, j, l)?;
            let detail = if b.holds() {
                String::new()
            } else {
                format!("{} != {}", format_rational(&b.lhs), format_rational(&b.rhs))
            };
            push_check(
                &mut r,
                "binomial_identity",
                format!("{j}:{l}"),
                b.holds(),
                detail,
            );
        }
    }
    for k in 0..=n {
        let degree = build_scaling_polynomial(&bw, k)?.poly().degree();
        let ok = degree == Some(k);
        push_check(
            &mut r,
            "scaling_degree",
            k.to_string(),
            ok,
            degree_detail(ok, degree),
        );
    }
    for l in 0..=n {
        let e = series.e(l);
        let degree = e.degree();
        let ok = degree == Some(l);
        push_check(
            &mut r,
            "reexpanded_degree",
            l.to_string(),
            ok,
            degree_detail(ok, degree),
        );
        let at_zero = e.eval(&Rational::new());
        let ok = &at_zero == bw.coeff(l);
        let detail = if ok {
            String::new()
        } else {
            format_rational(&at_zero)
        };
        push_check(&mut r, "reexpanded_at_zero", l.to_string(), ok, detail);
    }
    let ok = build_scaling_polynomial(&bw, n)? == scaling_polynomial_via_derivative(&bw, n)?;
    push_check(
        &mut r,
        "scaling_is_derivative",
        n.to_string(),
        ok,
        String::new(),
    );

    if let Some(dir) = &g.cache {
        let cache = CoefficientCache::new(dir);
        let (ok, detail) = match cache.load(p, 0) {
            Ok(None) => (true, "absent".to_string()),
            Ok(Some(stored)) => {
                let fresh = generate_bw_coefficients(p, stored.order())?;
                if stored == fresh {
                    (true, format!("order {}", stored.order()))
                } else {
                    (
                        false,
                        "stored coefficients differ from the recursion".into(),
                    )
                }
            }
            Err(e) => (false, e.to_string()),
        };
        push_check(&mut r, "cache", p.to_string(), ok, detail);
    }
    let failures = r.rows.iter().filter(|row| row[2] == "fail").count();
    r.note("checks", r.rows.len().to_string());
    r.note("failures", failures.to_string());
    Ok(r)
}

fn degree_detail(ok: bool, degree: Option<usize>) -> String {
    if ok {
        String::new()
    } else {
        degree.map_or("zero polynomial".into(), |d| format!("degree {d}"))
    }
}
