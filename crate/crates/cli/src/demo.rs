use std::sync::Arc;

use serde_json::json;

use hsforge::ray_order::s_set;
use hsforge::{generate_hs, peel_ray, sorted_rays, CoIdeal, HSDeriv, MultiIndex, SeriesDoc};

use crate::commands::{algebra, components, matrix};
use crate::report::Report;
use crate::{AlgebraArgs, DemoName};

pub fn run(name: DemoName, p: u64, exponents: &[u32], seed: u64) -> anyhow::Result<Report> {
    let args = AlgebraArgs { p, exponents: exponents.to_vec() };
    match name {
        DemoName::Example33 => example_box22(&args, seed),
        DemoName::IntroLength2 => commutator_length2(&args, seed),
    }
}

fn inputs(name: &str, args: &AlgebraArgs, seed: u64) -> serde_json::Value {
    json!({ "name": name, "p": args.p, "exponents": args.exponents, "seed": seed })
}

fn example_box22(args: &AlgebraArgs, seed: u64) -> anyhow::Result<Report> {
    let a = algebra(args)?;
    let delta = Arc::new(CoIdeal::boxed(&MultiIndex::from([2, 2]))?);
    let d = generate_hs(&a, &delta, seed, 1)?;
    let mut report = Report::new("demo", inputs("example-3-3", args, seed));

    let rays = sorted_rays(&delta)?;
    let shown: Vec<String> = rays.iter().map(|r| r.to_string()).collect();
    report.check_with("ray order", shown == ["(0,1)", "(1,2)", "(1,1)", "(2,1)", "(1,0)"], shown.join(" < "));

    let mut rest = d.clone();
    let mut factors = Vec::new();
    for (k, beta) in rays.iter().enumerate() {
        let peel = peel_ray(&rest, beta)?;
        report.check(format!("peel {beta} recomposes"), peel.recomposition_ok);
        rest = peel.remainder;
        if let Some(next) = rays.get(k + 1) {
            let s = s_set(&delta, next);
            let clear = s.iter().all(|g| rest.coeff(g).is_none_or(|op| op.is_zero()));
            let listed: Vec<String> = s.iter().map(|g| g.to_string()).collect();
            report.check_with(format!("D^{} vanishes below {next}", k + 1), clear, listed.join(" "));
        }
        factors.push(peel.factor);
    }
    report.check("final remainder is the identity", rest.is_identity());

    let x = |i: u32, j: u32| d.at(&[i, j]);
    let e = |k: usize, n: u32| factors[k].component(n);
    report.check("E^1 = (D_(0,1), D_(0,2))", e(0, 1) == x(0, 1) && e(0, 2) == x(0, 2));
    let e2_1 = x(1, 2) - x(0, 1) * x(1, 1) - x(0, 2) * x(1, 0) + x(0, 1) * x(0, 1) * x(1, 0);
    report.check("E^2_1", e(1, 1) == e2_1);
    report.check("E^3_1", e(2, 1) == x(1, 1) - x(0, 1) * x(1, 0));
    let e3_2 = x(2, 2) - x(0, 1) * x(2, 1) - x(0, 2) * x(2, 0) - x(1, 2) * x(1, 0)
        + x(0, 1) * x(0, 1) * x(2, 0)
        + x(0, 1) * x(1, 1) * x(1, 0)
        + x(0, 2) * x(1, 0) * x(1, 0)
        - x(0, 1) * x(0, 1) * x(1, 0) * x(1, 0);
    report.check_with("E^3_2", e(2, 2) == e3_2, if e3_2.is_zero() { "zero for this seed" } else { "nonzero" });
    let e4_1 = x(2, 1) - x(0, 1) * x(2, 0) - x(1, 1) * x(1, 0) + x(0, 1) * x(1, 0) * x(1, 0);
    report.check("E^4_1", e(3, 1) == e4_1);
    report.check("E^5 = (D_(1,0), D_(2,0))", e(4, 1) == x(1, 0) && e(4, 2) == x(2, 0));

    let mut listed = Vec::new();
    for (beta, f) in rays.iter().zip(&factors) {
        listed.push(json!({ "ray": beta.to_string(), "components": components(f)? }));
    }
    report.outputs = json!({ "input": SeriesDoc::from_hs(&d), "factors": listed });
    Ok(report)
}

fn commutator_length2(args: &AlgebraArgs, seed: u64) -> anyhow::Result<Report> {
    let a = algebra(args)?;
    let uni = Arc::new(CoIdeal::uni(2));
    let d = generate_hs(&a, &uni, seed, 1)?;
    let e = generate_hs(&a, &uni, seed.wrapping_add(1), 1)?;
    let mut report = Report::new("demo", inputs("intro-length-2", args, seed));

    let g: HSDeriv = d.external_product(&e)?.compose(&d.inverse().external_product(&e.inverse())?)?;
    let axes = [[1, 0], [2, 0], [0, 1], [0, 2]].iter().all(|ax| g.at(ax).is_zero());
    report.check("G vanishes on the axes", axes);
    let (d1, d2, e1, e2) = (d.component(1), d.component(2), e.component(1), e.component(2));
    report.check("G_(1,1) = [D_1, E_1]", g.at(&[1, 1]) == d1.bracket(&e1)?);
    let eight = &d2 * &e2 - &d2 * &e1 * &e1 - &d1 * &e2 * &d1 + &d1 * &e1 * &d1 * &e1 + &e2 * &d1 * &d1
        - &e2 * &d2
        - &e1 * &d1 * &d1 * &e1
        + &e1 * &d2 * &e1;
    report.check_with(
        "G_(2,2) eight-term expansion",
        g.at(&[2, 2]) == eight,
        if eight.is_zero() { "zero for this seed" } else { "nonzero" },
    );
    report.check("G satisfies leibniz", g.recheck().passed);

    report.outputs = json!({
        "d": components(&d)?,
        "e": components(&e)?,
        "g_1_1": matrix(&g.at(&[1, 1])),
        "g_2_2": matrix(&g.at(&[2, 2])),
    });
    Ok(report)
}
