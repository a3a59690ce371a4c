use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use serde_json::{json, Map, Value};

use hsforge::order::order_leq_basis;
use hsforge::ray_order::sorted_rays_box2;
use hsforge::{
    boxtimes_form, bracket_integral, generate_hs, is_m_integrable, leibniz_check, lemma44_defect, order_leq,
    order_of, p_power_integral, ray_data, sorted_rays, CoIdeal, Field, FiniteAlgebra, HSDeriv, LinOp, LinOpDoc,
    MultiIndex, SeriesDoc,
};

use crate::report::Report;
use crate::{AlgebraArgs, Shape};

/// Basis sequences the brute-force order check may visit.
const BASIS_ROUTE_LIMIT: u128 = 200_000;

pub fn matrix(op: &LinOp) -> Value {
    json!(op.to_string_rows())
}

pub fn components(d: &HSDeriv) -> anyhow::Result<Value> {
    let mut out = Map::new();
    for n in 1..=d.length()? {
        out.insert(n.to_string(), matrix(&d.component(n)));
    }
    Ok(Value::Object(out))
}

pub fn algebra(args: &AlgebraArgs) -> anyhow::Result<Arc<FiniteAlgebra>> {
    let field = if args.p == 0 { Field::Rationals } else { Field::prime(args.p)? };
    Ok(Arc::new(FiniteAlgebra::monomial_quotient(field, &args.exponents)?))
}

fn coideal(q: Option<usize>, shape: &Shape, m: Option<u32>) -> anyhow::Result<Arc<CoIdeal>> {
    let delta = match (&shape.corner, shape.total_degree, m) {
        (Some(c), None, None) => {
            if let Some(q) = q.filter(|&q| q != c.len()) {
                bail!("--q {q} but the box corner has {} entries", c.len());
            }
            CoIdeal::boxed(&MultiIndex::new(c.clone()))?
        }
        (None, Some(r), None) => match q {
            Some(q) => CoIdeal::total_degree(q, r)?,
            None => bail!("--total-degree needs --q"),
        },
        (None, None, Some(m)) => CoIdeal::uni(m),
        _ => bail!("give exactly one of --box, --total-degree, --m"),
    };
    Ok(Arc::new(delta))
}

fn shape_json(q: Option<usize>, shape: &Shape, m: Option<u32>) -> Value {
    json!({ "q": q, "box": shape.corner, "total_degree": shape.total_degree, "m": m })
}

/// Accepts a bare series document or a report carrying one under
/// `outputs.series`.
fn read_series(path: &Path) -> anyhow::Result<SeriesDoc> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(inner) = value.pointer_mut("/outputs/series") {
        value = inner.take();
    }
    serde_json::from_value(value).with_context(|| format!("{} is not a series document", path.display()))
}

fn read_linop(path: &Path) -> anyhow::Result<(Arc<FiniteAlgebra>, LinOp)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: LinOpDoc =
        serde_json::from_str(&text).with_context(|| format!("{} is not an operator document", path.display()))?;
    doc.load().with_context(|| format!("loading {}", path.display()))
}

pub fn load_hs(path: &Path) -> anyhow::Result<HSDeriv> {
    let doc = read_series(path)?;
    let d = doc.to_hs().with_context(|| format!("loading {}", path.display()))?;
    if !d.certified() {
        bail!("{} is marked uncertified", path.display());
    }
    Ok(d)
}

fn path_json(path: &Path) -> Value {
    json!(path.display().to_string())
}

pub fn ray_order(q: Option<usize>, shape: &Shape) -> anyhow::Result<Report> {
    let delta = coideal(q, shape, None)?;
    let mut report = Report::new("ray-order", shape_json(q, shape, None));
    let rays = sorted_rays(&delta)?;
    let mut listed = Vec::with_capacity(rays.len());
    let mut covered = 0usize;
    for beta in &rays {
        let data = ray_data(&delta, beta)?;
        covered += data.multiplicity as usize;
        listed.push(json!({ "ray": beta.to_string(), "multiplicity": data.multiplicity }));
    }
    report.outputs = json!({ "count": rays.len(), "rays": listed });
    report.check_with(
        "orbits cover the nonzero members",
        covered + 1 == delta.len(),
        format!("{covered} of {}", delta.len() - 1),
    );
    if let Some(c) = shape.corner.as_ref().filter(|c| c.len() == 2) {
        report.check("box enumeration agrees with the comparison sort", sorted_rays_box2(c[0], c[1]) == rays);
    }
    Ok(report)
}

pub fn generate(
    args: &AlgebraArgs,
    q: Option<usize>,
    shape: &Shape,
    m: Option<u32>,
    seed: u64,
    vanish_below: u32,
    out: Option<&Path>,
) -> anyhow::Result<Report> {
    let a = algebra(args)?;
    let delta = coideal(q, shape, m)?;
    let mut report = Report::new(
        "generate",
        json!({
            "p": args.p,
            "exponents": args.exponents,
            "shape": shape_json(q, shape, m),
            "seed": seed,
            "vanish_below": vanish_below,
        }),
    );
    let d = generate_hs(&a, &delta, seed, vanish_below)?;
    let doc = SeriesDoc::from_hs(&d);
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&doc)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    report.outputs = json!({ "series": doc });
    let check = d.recheck();
    report.check("leibniz", check.passed);
    Ok(report)
}

pub fn decompose(input: &Path, certify: bool, emit_boxtimes: bool) -> anyhow::Result<Report> {
    let d = load_hs(input)?;
    let mut report = Report::new(
        "decompose",
        json!({ "input": path_json(input), "certify": certify, "emit_boxtimes": emit_boxtimes }),
    );
    let dec = hsforge::decompose(&d)?;
    let mut factors = Vec::with_capacity(dec.factors.len());
    for (beta, e) in &dec.factors {
        factors.push(json!({ "ray": beta.to_string(), "length": e.length()?, "components": components(e)? }));
    }
    let cert = &dec.certificate;
    let mut outputs = json!({ "factors": factors, "certificate": cert });
    if certify {
        for (k, (beta, _)) in dec.factors.iter().enumerate() {
            report.check(format!("peel {beta}: remainder support"), cert.support_steps[k]);
            report.check(format!("peel {beta}: step recomposes"), cert.step_recomposition[k]);
            report.check(format!("factor {beta}: leibniz"), cert.factors_leibniz[k]);
        }
        report.check("final remainder is the identity", cert.remainder_identity);
        report.check("ordered composition equals the input", cert.recomposition_equal);
    } else {
        report.check("decomposition certificate", cert.passed);
    }
    if emit_boxtimes {
        let form = boxtimes_form(&dec.coideal, &dec.factors)?;
        let agrees = form.substitution.act(&form.product)? == d;
        outputs["boxtimes"] = json!({
            "source": form.product.coideal().to_doc(),
            "product": SeriesDoc::from_hs(&form.product),
        });
        report.check("substituted product equals the input", agrees);
    }
    report.outputs = outputs;
    Ok(report)
}

pub fn bracket(d_path: &Path, e_path: &Path) -> anyhow::Result<Report> {
    let d = load_hs(d_path)?;
    let e = load_hs(e_path)?;
    let mut report = Report::new("bracket", json!({ "d": path_json(d_path), "e": path_json(e_path) }));
    let b = bracket_integral(&d, &e)?;
    let cert = &b.certificate;
    report.outputs = json!({
        "bracket": matrix(&cert.derivation),
        "length": cert.length,
        "integral": SeriesDoc::from_hs(&cert.integral),
    });
    report
        .check("axes of the commutator vanish", b.axes_vanish)
        .check("integral satisfies leibniz", cert.leibniz_ok)
        .check("first component is the bracket", cert.component_one_ok);
    Ok(report)
}

pub fn p_power(d_path: &Path) -> anyhow::Result<Report> {
    let d = load_hs(d_path)?;
    let mut report = Report::new("p-power", json!({ "d": path_json(d_path) }));
    let pw = p_power_integral(&d)?;
    report.outputs = json!({
        "p": pw.p,
        "alpha": pw.alpha,
        "delta_p": matrix(&pw.delta_p),
        "power": SeriesDoc::from_hs(&pw.power),
    });
    report
        .check("components below p vanish", pw.low_vanish)
        .check("component p is the p-th power of the derivation", pw.top_is_delta_p)
        .check("convolution and binomial routes agree", pw.dual_route_agrees)
        .check("extension satisfies leibniz", pw.leibniz_ok);
    Ok(report)
}

pub fn integrate(delta_path: &Path, m: u32) -> anyhow::Result<Report> {
    let (a, delta) = read_linop(delta_path)?;
    let mut report = Report::new("integrate", json!({ "delta": path_json(delta_path), "m": m }));
    match is_m_integrable(&a, &delta, m)? {
        Some(cert) => {
            report.outputs = json!({ "found": true, "integral": SeriesDoc::from_hs(&cert.integral) });
            report
                .check("integral found", true)
                .check("integral satisfies leibniz", cert.leibniz_ok)
                .check("first component is the input", cert.component_one_ok);
        }
        None => {
            report.outputs = json!({ "found": false });
            let detail = if m <= 3 { "not integrable" } else { "search exhausted" };
            report.check_with("integral found", false, detail);
        }
    }
    Ok(report)
}

pub fn verify(input: &Path) -> anyhow::Result<Report> {
    let doc = read_series(input)?;
    let s = doc.to_series().with_context(|| format!("loading {}", input.display()))?;
    let mut report = Report::new("verify", json!({ "input": path_json(input) }));
    let check = leibniz_check(&s);
    report.outputs = json!({ "claimed_certified": doc.certified, "leibniz": check });
    match &check.violation {
        None => report.check("leibniz", true),
        Some(v) => report.check_with("leibniz", false, format!("fails at {} on basis pair ({}, {})", v.alpha, v.i, v.j)),
    };
    Ok(report)
}

pub fn order(input: &Path, bound: u32) -> anyhow::Result<Report> {
    let (a, op) = read_linop(input)?;
    let mut report = Report::new("order", json!({ "input": path_json(input), "bound": bound }));
    let verdict = order_leq(&a, &op, bound);
    report.outputs = json!({ "verdict": verdict, "order": order_of(&a, &op) });
    report.check(format!("order at most {bound}"), verdict);
    let sequences = (a.dim() as u128).checked_pow(bound + 1);
    if sequences.is_some_and(|n| n <= BASIS_ROUTE_LIMIT) {
        report.check("generator and basis routes agree", order_leq_basis(&a, &op, bound) == verdict);
    }
    Ok(report)
}

pub fn lemma44(d_path: &Path, e_path: &Path) -> anyhow::Result<Report> {
    let d = load_hs(d_path)?;
    let e = load_hs(e_path)?;
    let mut report = Report::new("lemma44", json!({ "d": path_json(d_path), "e": path_json(e_path) }));
    let (defect, verdict) = lemma44_defect(&d, &e)?;
    let a = d.algebra();
    report.outputs = json!({
        "defect": matrix(&defect),
        "bound": verdict.claimed_bound,
        "order": order_of(a, &defect),
    });
    report.check(format!("defect has order at most {}", verdict.claimed_bound), verdict.verdict);
    Ok(report)
}
