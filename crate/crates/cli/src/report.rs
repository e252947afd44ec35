//! Human-readable and JSON renderings of command results.

use std::fmt::Write;
use std::path::Path;

use eqtoric::certificate::{Certificate, Status, Verdict};
use eqtoric::cone::Face;
use eqtoric::error::Result;
use eqtoric::graded_algebra::{AlgebraElem, MonomialIdeal, ToricGAlgebra};
use eqtoric::lattice::{kernel_basis, to_big, to_small, FinAbGroup, IntMat};
use eqtoric::monoid::{AffineMonoid, Point};
use eqtoric::problem::Loaded;
use serde_json::{json, Value};

pub struct Report {
    pub text: String,
    pub json: Value,
}

fn ray_list(f: &Face) -> String {
    let rays: Vec<String> = f.ray_indices.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", rays.join(","))
}

/// Monomials print bare, as e[m].
fn mono(x: &AlgebraElem) -> String {
    match x.as_monomial() {
        Some((m, c)) if c.is_one() => format!("e[{}]", m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")),
        _ => x.to_string(),
    }
}

fn join(xs: &[AlgebraElem]) -> String {
    strings(xs).join(", ")
}

fn strings(xs: &[AlgebraElem]) -> Vec<String> {
    xs.iter().map(mono).collect()
}

/// Minimal interior monomials: J-generators of A, computed as the invariant
/// part of J for the trivial grading.
fn j_generators(alg: &ToricGAlgebra) -> Result<Vec<AlgebraElem>> {
    let trivial = ToricGAlgebra::new(alg.coeff, alg.cone().clone(), FinAbGroup::free(1), IntMat::zeros(1, alg.rank()))?
        .with_budget(alg.budget());
    trivial.invariant_part_of_monomial_ideal(MonomialIdeal::Interior)
}

pub fn faces(l: &Loaded) -> Result<Report> {
    let cone = l.alg.cone();
    let mut faces = cone.faces();
    faces.sort_by(|a, b| (a.dim, &a.ray_indices).cmp(&(b.dim, &b.ray_indices)));
    let codim1 = cone.codim1_faces();
    let smallest = cone.smallest_face();
    let jgens = j_generators(&l.alg)?;

    let mut text = String::new();
    let d = cone.ambient_rank();
    let _ = writeln!(text, "cone: dimension {} in Z^{d}, {} rays, {}", cone.dim(), cone.rays().len(), if cone.is_pointed() { "pointed" } else { "not pointed" });
    for (i, r) in cone.rays().iter().enumerate() {
        let r: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "  ray {i}: ({})", r.join(","));
    }
    let _ = writeln!(text, "faces ({}):", faces.len());
    let mut json_faces = vec![];
    for f in &faces {
        let covers: Vec<String> =
            faces.iter().filter(|g| g.dim == f.dim + 1 && f.is_subface_of(g)).map(ray_list).collect();
        let _ = writeln!(text, "  dim {} rays {} below {}", f.dim, ray_list(f), if covers.is_empty() { "-".into() } else { covers.join(" ") });
        json_faces.push(json!({"dim": f.dim, "rays": f.ray_indices, "covered_by": covers}));
    }
    let c1: Vec<String> = codim1.iter().map(ray_list).collect();
    let _ = writeln!(text, "codimension-1 faces: {}", if c1.is_empty() { "none".into() } else { c1.join(" ") });
    let _ = writeln!(text, "smallest face: dim {} rays {}", smallest.dim, ray_list(&smallest));
    let _ = writeln!(text, "J generators: {}", if jgens.is_empty() { "none".into() } else { join(&jgens) });
    let json = json!({
        "dim": cone.dim(),
        "ambient_rank": d,
        "pointed": cone.is_pointed(),
        "rays": cone.rays().iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "faces": json_faces,
        "codim1": codim1.iter().map(|f| f.ray_indices.clone()).collect::<Vec<_>>(),
        "smallest_face": {"dim": smallest.dim, "rays": smallest.ray_indices},
        "j_generators": strings(&jgens),
    });
    Ok(Report { text, json })
}

/// Binomial u^a = u^b for a relation vector a − b among generators u_i.
fn binomial(v: &[i64]) -> String {
    let side = |sign: i64| {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c * sign > 0)
            .map(|(i, &c)| if c.abs() == 1 { format!("u{i}") } else { format!("u{i}^{}", c.abs()) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    };
    format!("{} = {}", side(1), side(-1))
}

pub fn invariants(l: &Loaded) -> Result<Report> {
    let alg = &l.alg;
    let ring = alg.coeff.name();
    let gens: Vec<Point> = alg.invariant_monoid().generators()?;
    let mut all: Vec<Point> = AffineMonoid::new(alg.cone().clone()).with_budget(alg.budget()).generators()?;
    let mut sorted = gens.clone();
    sorted.sort();
    all.sort();
    let elems: Vec<AlgebraElem> = gens.iter().map(|q| AlgebraElem::e(q)).collect();
    // integer relations among the exponent vectors; the toric ideal is their saturation
    let relations: Vec<Vec<i64>> = if gens.is_empty() {
        vec![]
    } else {
        let cols: Vec<Vec<_>> = gens.iter().map(|q| to_big(q)).collect();
        kernel_basis(&IntMat::from_cols(&cols, alg.rank()))
            .to_cols()
            .iter()
            .map(|c| to_small(c).expect("small relations"))
            .collect()
    };
    let presentation = if gens.is_empty() {
        format!("A^G = {ring}")
    } else if sorted == all {
        format!("A^G = A = {ring}[{}]", join(&elems))
    } else {
        format!("A^G = {ring}[{}]", join(&elems))
    };

    let mut text = String::new();
    let _ = writeln!(text, "grading group: {}", alg.group);
    let _ = writeln!(text, "invariant monoid generators ({}):", gens.len());
    for (i, x) in elems.iter().enumerate() {
        let _ = writeln!(text, "  u{i} = {}", mono(x));
    }
    let _ = writeln!(text, "{presentation}");
    if relations.is_empty() {
        let _ = writeln!(text, "relation lattice: 0");
    } else {
        let _ = writeln!(text, "relation lattice basis:");
        for r in &relations {
            let _ = writeln!(text, "  {}", binomial(r));
        }
    }
    let json = json!({
        "group": alg.group.to_string(),
        "generators": strings(&elems),
        "presentation": presentation,
        "relations": relations.iter().map(|r| binomial(r)).collect::<Vec<_>>(),
    });
    Ok(Report { text, json })
}

pub fn trivialized(cert: &Certificate, out: Option<&Path>) -> Report {
    let mut text = String::new();
    let written = out.map(|p| p.display().to_string());
    match cert.status {
        Status::Complete => {
            let _ = writeln!(text, "status: complete");
            let _ = writeln!(text, "rank: {}", cert.target_weights.len());
            let ws: Vec<String> = cert.target_weights.iter().map(|w| format!("{w:?}")).collect();
            let _ = writeln!(text, "weights: [{}]", ws.join(", "));
            let _ = writeln!(text, "K0 class: {}", cert.k0_class);
            let _ = writeln!(text, "trace steps: {}", cert.trace.len());
        }
        Status::Partial => {
            let _ = writeln!(text, "status: partial");
            let _ = writeln!(text, "failed step: {}", cert.failed_step.as_deref().unwrap_or("?"));
            let _ = writeln!(text, "reason: {}", cert.reason.as_deref().unwrap_or("?"));
            let partial = json!({"failed_step": cert.failed_step, "reason": cert.reason, "trace": cert.trace});
            let _ = writeln!(text, "{}", serde_json::to_string_pretty(&partial).expect("traces serialize"));
        }
    }
    if let Some(w) = &written {
        let _ = writeln!(text, "certificate: {w}");
    }
    let mut json = json!({
        "status": cert.status,
        "problem_hash": cert.problem_hash,
        "weights": cert.target_weights,
        "k0_class": cert.k0_class,
        "certificate": written,
    });
    if cert.status == Status::Partial {
        json["failed_step"] = json!(cert.failed_step);
        json["reason"] = json!(cert.reason);
        json["trace"] = json!(cert.trace);
    }
    Report { text, json }
}

pub fn verified(v: &Verdict) -> Report {
    match v {
        Verdict::Complete { rank, checks } => Report {
            text: format!("ok: complete certificate of rank {rank}, {checks} identities checked\n"),
            json: json!({"ok": true, "status": "complete", "rank": rank, "checks": checks}),
        },
        Verdict::Partial { failed_step, checks } => Report {
            text: format!("ok: partial certificate stopping at {failed_step}, {checks} identities checked\n"),
            json: json!({"ok": true, "status": "partial", "failed_step": failed_step, "checks": checks}),
        },
    }
}

pub fn failure(message: &str, code: u8) -> Report {
    Report { text: format!("error: {message}\n"), json: json!({"ok": false, "exit_code": code, "error": message}) }
}
