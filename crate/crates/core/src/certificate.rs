//! Certificates: the serialized outcome of a trivialization and an
//! independent checker that replays every recorded identity using only the
//! algebra's arithmetic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone::Face;
use crate::graded_algebra::ToricGAlgebra;
use crate::graded_linalg::{mat, restrict_to_face, ElemMat, GradedMatrix};
use crate::lattice::{to_small, GroupElem};
use crate::problem::{Loaded, ProblemFile};
use crate::trivializer::{GActionProblem, Outcome, TraceEntry};

pub const CERT_FORMAT: &str = "eqtoric-certificate";
pub const CERT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Partial,
}

/// S: E → F and T: F → E, rendered entrywise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoEntries {
    pub forward: Vec<Vec<String>>,
    pub backward: Vec<Vec<String>>,
}

/// `indices` pick a block of E; `face` lists ray indices of σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TraceRecord {
    /// S·T = I and T·S = e over the face, with F carrying `weights`.
    FaceIso { indices: Vec<usize>, face: Vec<usize>, weights: Vec<Vec<i64>>, forward: Vec<Vec<String>>, backward: Vec<Vec<String>> },
    /// The patched pair agrees with e modulo the interior ideal of the face and h = det(S̄·e·T̄).
    Patch { indices: Vec<usize>, face: Vec<usize>, forward: Vec<Vec<String>>, backward: Vec<Vec<String>>, h: String },
    /// P̃ is invertible over the invariants and P·P̃ is diagonal modulo J^n.
    Glue { indices: Vec<usize>, face: Vec<usize>, kappa: Vec<i64>, n: u32, s: u32, p: Vec<Vec<String>>, p_tilde: Vec<Vec<String>> },
    Final { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub version: u32,
    pub status: Status,
    pub problem_hash: String,
    pub seed: u64,
    pub coefficients: String,
    pub source_weights: Vec<Vec<i64>>,
    pub target_weights: Vec<Vec<i64>>,
    pub k0_class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso_entries: Option<IsoEntries>,
    pub trace: Vec<TraceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_step: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn coords(w: &GroupElem) -> Vec<i64> {
    to_small(&w.coords()).expect("weight coordinates fit in i64")
}

fn render(a: &ElemMat) -> Vec<Vec<String>> {
    mat::render(a)
}

fn record(t: &TraceEntry) -> TraceRecord {
    match t {
        TraceEntry::FaceIso { indices, face, weights, s, t } => TraceRecord::FaceIso {
            indices: indices.clone(),
            face: face.clone(),
            weights: weights.iter().map(coords).collect(),
            forward: render(s),
            backward: render(t),
        },
        TraceEntry::Patch { indices, face, sbar, tbar, h } => TraceRecord::Patch {
            indices: indices.clone(),
            face: face.clone(),
            forward: render(sbar),
            backward: render(tbar),
            h: h.to_string(),
        },
        TraceEntry::Glue { indices, face, kappa, n, s, p, p_tilde } => TraceRecord::Glue {
            indices: indices.clone(),
            face: face.clone(),
            kappa: kappa.clone(),
            n: *n,
            s: *s,
            p: render(p),
            p_tilde: render(p_tilde),
        },
        TraceEntry::Final { rank } => TraceRecord::Final { rank: *rank },
    }
}

/// Multiset of weights as "k*[w] + …", in the order of the group elements.
pub fn k0_string(weights: &[GroupElem]) -> String {
    let mut terms: BTreeMap<&GroupElem, usize> = BTreeMap::new();
    for w in weights {
        *terms.entry(w).or_default() += 1;
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(w, k)| format!("{k}*[{w}]")).collect::<Vec<_>>().join(" + ")
}

impl Certificate {
    pub fn from_outcome(file: &ProblemFile, p: &GActionProblem, outcome: &Outcome, seed: u64) -> Certificate {
        let e = p.idempotent();
        let mut cert = Certificate {
            format: CERT_FORMAT.into(),
            version: CERT_VERSION,
            status: Status::Complete,
            problem_hash: file.hash(),
            seed,
            coefficients: p.alg.coeff.name(),
            source_weights: e.source.iter().map(coords).collect(),
            target_weights: vec![],
            k0_class: "0".into(),
            iso_entries: None,
            trace: vec![],
            failed_step: None,
            reason: None,
        };
        match outcome {
            Outcome::Complete(t) => {
                cert.target_weights = t.iso.weights.iter().map(coords).collect();
                cert.k0_class = k0_string(&t.iso.weights);
                cert.iso_entries = Some(IsoEntries { forward: render(&t.iso.s), backward: render(&t.iso.t) });
                cert.trace = t.trace.iter().map(record).collect();
            }
            Outcome::Partial(pr) => {
                cert.status = Status::Partial;
                cert.trace = pr.trace.iter().map(record).collect();
                cert.failed_step = Some(pr.failed_step.clone());
                cert.reason = Some(pr.reason.clone());
            }
        }
        cert
    }

    /// Pretty JSON with a trailing newline; byte-identical for identical inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> crate::error::Result<Certificate> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
    }
}

/// What a successful replay established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Complete { rank: usize, checks: usize },
    /// Every recorded step replays; the run stopped at `failed_step`.
    Partial { failed_step: String, checks: usize },
}

/// The first identity that did not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure(pub String);

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

type Check<T> = std::result::Result<T, VerifyFailure>;

fn fail<T>(msg: impl Into<String>) -> Check<T> {
    Err(VerifyFailure(msg.into()))
}

struct Replay<'a> {
    alg: &'a ToricGAlgebra,
    e: GradedMatrix,
    faces: Vec<Face>,
    checks: usize,
}

impl Replay<'_> {
    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) -> Check<()> {
        self.checks += 1;
        if ok {
            Ok(())
        } else {
            fail(what())
        }
    }

    fn parse(&self, a: &[Vec<String>], rows: usize, cols: usize, what: &str) -> Check<ElemMat> {
        if a.len() != rows || a.iter().any(|r| r.len() != cols) {
            return fail(format!("{what}: expected a {rows}×{cols} matrix"));
        }
        a.iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, s)| self.alg.parse(s).map_err(|err| VerifyFailure(format!("{what}: entry ({i},{j}): {err}"))))
                    .collect()
            })
            .collect()
    }

    fn weights(&self, ws: &[Vec<i64>], what: &str) -> Check<Vec<GroupElem>> {
        let g = &self.alg.group;
        ws.iter()
            .map(|w| {
                if w.len() != g.ngens() {
                    return fail(format!("{what}: weight {w:?} has the wrong length"));
                }
                Ok(g.reduce(&w.iter().map(|&v| v.into()).collect::<Vec<_>>()))
            })
            .collect()
    }

    fn face(&self, rays: &[usize], what: &str) -> Check<Face> {
        match self.faces.iter().find(|f| f.ray_indices == rays) {
            Some(f) => Ok(f.clone()),
            None => fail(format!("{what}: rays {rays:?} do not span a face of the cone")),
        }
    }

    fn block(&self, indices: &[usize], what: &str) -> Check<GradedMatrix> {
        let n = self.e.rows();
        if indices.is_empty() || indices.iter().any(|&i| i >= n) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!("{what}: bad block indices {indices:?}"));
        }
        let entries = mat::select(&self.e.entries, indices, indices);
        let ws: Vec<GroupElem> = indices.iter().map(|&i| self.e.source[i].clone()).collect();
        Ok(GradedMatrix { source: ws.clone(), target: ws, entries })
    }

    fn graded(&mut self, src: &[GroupElem], tgt: &[GroupElem], a: &ElemMat, what: &str) -> Check<()> {
        let ok = GradedMatrix::new(self.alg, src.to_vec(), tgt.to_vec(), a.clone()).is_ok();
        self.ensure(ok, || format!("{what}: entries are not homogeneous of the prescribed weights"))
    }

    fn supported(&mut self, a: &ElemMat, inside: impl Fn(&[i64]) -> bool, what: &str) -> Check<()> {
        let bad = a.iter().flatten().find(|x| x.support().any(|m| !inside(m))).cloned();
        self.ensure(bad.is_none(), || format!("{what}: entry {} has monomials outside the face", bad.unwrap()))
    }

    fn iso_pair(&mut self, s: &ElemMat, t: &ElemMat, e: &ElemMat, r: usize, what: &str) -> Check<()> {
        let n = e.len();
        let st = if r == 0 { vec![] } else { mat::mul(s, t) };
        self.ensure(mat::is_identity(&st), || format!("{what}: S·T ≠ I"))?;
        let ts = if r == 0 { mat::zeros(n, n) } else { mat::mul(t, s) };
        self.ensure(ts == *e, || format!("{what}: T·S ≠ e"))
    }

    fn face_algebra(&self, tau: &Face, what: &str) -> Check<ToricGAlgebra> {
        ToricGAlgebra::new(self.alg.coeff, self.alg.cone().face_cone(tau), self.alg.group.clone(), self.alg.psi.clone())
            .map(|a| a.with_budget(self.alg.budget()))
            .map_err(|err| VerifyFailure(format!("{what}: {err}")))
    }

    fn record(&mut self, k: usize, rec: &TraceRecord) -> Check<()> {
        let d = self.alg.rank();
        match rec {
            TraceRecord::FaceIso { indices, face, weights, forward, backward } => {
                let what = format!("trace[{k}] face_iso on face {face:?}");
                let blk = self.block(indices, &what)?;
                let tau = self.face(face, &what)?;
                let ws = self.weights(weights, &what)?;
                let (n, r) = (indices.len(), ws.len());
                let s = self.parse(forward, r, n, &what)?;
                let t = self.parse(backward, n, r, &what)?;
                self.graded(&blk.source, &ws, &s, &what)?;
                self.graded(&ws, &blk.source, &t, &what)?;
                self.supported(&s, |m| tau.contains(m), &what)?;
                self.supported(&t, |m| tau.contains(m), &what)?;
                let e_tau = restrict_to_face(self.alg, &blk, &tau).entries;
                self.iso_pair(&s, &t, &e_tau, r, &what)
            }
            TraceRecord::Patch { indices, face, forward, backward, h } => {
                let what = format!("trace[{k}] patch on face {face:?}");
                let blk = self.block(indices, &what)?;
                let tau = self.face(face, &what)?;
                let n = indices.len();
                let r = forward.len();
                let s = self.parse(forward, r, n, &what)?;
                let t = self.parse(backward, n, r, &what)?;
                let h = self.alg.parse(h).map_err(|err| VerifyFailure(format!("{what}: h: {err}")))?;
                self.supported(&s, |m| tau.contains(m), &what)?;
                self.supported(&t, |m| tau.contains(m), &what)?;
                // modulo J_τ: drop monomials in the relative interior of τ
                let boundary = |a: &ElemMat| mat::map(a, |x| x.filter(|m| !tau.relative_interior(m)));
                let e_tau = restrict_to_face(self.alg, &blk, &tau).entries;
                let st = if r == 0 { vec![] } else { mat::mul(&s, &t) };
                self.ensure(mat::is_identity(&boundary(&st)), || format!("{what}: S̄·T̄ ≢ I modulo the interior ideal"))?;
                let ts = if r == 0 { mat::zeros(n, n) } else { mat::mul(&t, &s) };
                self.ensure(boundary(&ts) == boundary(&e_tau), || format!("{what}: T̄·S̄ ≢ e modulo the interior ideal"))?;
                let m = if r == 0 { vec![] } else { mat::mul(&mat::mul(&s, &e_tau), &t) };
                let det = if r == 0 { self.alg.one() } else { mat::det(&m, d) };
                self.ensure(det == h, || format!("{what}: h ≠ det(S̄·e·T̄)"))?;
                self.ensure(self.alg.is_invariant(&h), || format!("{what}: h is not invariant"))?;
                let h1 = &h - &self.alg.one();
                let in_j = h1.support().all(|m| tau.relative_interior(m));
                self.ensure(in_j, || format!("{what}: h − 1 is not in the interior ideal"))
            }
            TraceRecord::Glue { indices, face, kappa, n, s: _, p, p_tilde } => {
                let what = format!("trace[{k}] glue on face {face:?}");
                self.block(indices, &what)?;
                let tau = self.face(face, &what)?;
                let falg = self.face_algebra(&tau, &what)?;
                self.ensure(kappa.len() == d && tau.relative_interior(kappa), || format!("{what}: κ is not interior to the face"))?;
                self.ensure(self.alg.group.is_zero(&self.alg.weight(kappa)), || format!("{what}: κ is not invariant"))?;
                let rows = p.len();
                let pm = self.parse(p, rows, rows, &what)?;
                let pt = self.parse(p_tilde, rows, rows, &what)?;
                for x in pm.iter().chain(&pt).flatten() {
                    self.ensure(falg.is_member(x) && falg.is_invariant(x), || format!("{what}: entry {x} is not an invariant of the face"))?;
                }
                let det = mat::det(&pt, d);
                self.ensure(falg.is_unit(&det), || format!("{what}: det P̃ = {det} is not a unit"))?;
                let prod = mat::mul(&pm, &pt);
                for (i, row) in prod.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        let ok = falg.ideal_j_power_member(x, *n).map_err(|err| VerifyFailure(format!("{what}: {err}")))?;
                        self.ensure(ok, || format!("{what}: (P·P̃)[{i}][{j}] = {x} is not in J^{n}"))?;
                    }
                }
                Ok(())
            }
            TraceRecord::Final { .. } => Ok(()),
        }
    }
}

/// Replays `cert` against the problem; independent of how it was produced.
pub fn verify(loaded: &Loaded, cert: &Certificate) -> Check<Verdict> {
    if cert.format != CERT_FORMAT || cert.version != CERT_VERSION {
        return fail(format!("unknown certificate format {} v{}", cert.format, cert.version));
    }
    if cert.problem_hash != loaded.file.hash() {
        return fail("problem hash mismatch: the certificate was issued for a different problem");
    }
    let p = loaded.problem().map_err(|e| VerifyFailure(e.to_string()))?;
    let alg = &p.alg;
    if cert.coefficients != alg.coeff.name() {
        return fail("coefficient ring mismatch");
    }
    let e = p.idempotent();
    let mut rp = Replay { alg, e: e.clone(), faces: alg.cone().faces(), checks: 0 };
    let src = rp.weights(&cert.source_weights, "source weights")?;
    rp.ensure(src == e.source, || "source weights differ from the problem's".into())?;
    for (k, rec) in cert.trace.iter().enumerate() {
        rp.record(k, rec)?;
    }
    match cert.status {
        Status::Partial => {
            let step = cert.failed_step.clone().ok_or_else(|| VerifyFailure("partial certificate without a failed step".into()))?;
            if cert.iso_entries.is_some() || matches!(cert.trace.last(), Some(TraceRecord::Final { .. })) {
                return fail("partial certificate carries a final isomorphism");
            }
            Ok(Verdict::Partial { failed_step: step, checks: rp.checks })
        }
        Status::Complete => {
            let ws = rp.weights(&cert.target_weights, "target weights")?;
            let (n, r) = (e.rows(), ws.len());
            let iso = cert.iso_entries.as_ref().ok_or_else(|| VerifyFailure("complete certificate without iso_entries".into()))?;
            let s = rp.parse(&iso.forward, r, n, "iso forward")?;
            let t = rp.parse(&iso.backward, n, r, "iso backward")?;
            rp.graded(&e.source, &ws, &s, "iso forward")?;
            rp.graded(&ws, &e.source, &t, "iso backward")?;
            let cone = alg.cone().clone();
            rp.supported(&s, |m| cone.contains(m), "iso forward")?;
            rp.supported(&t, |m| cone.contains(m), "iso backward")?;
            rp.iso_pair(&s, &t, &e.entries, r, "iso")?;
            rp.ensure(cert.trace.last() == Some(&TraceRecord::Final { rank: r }), || "trace does not end with the final rank".into())?;
            rp.ensure(cert.k0_class == k0_string(&ws), || "k0_class does not match the target weights".into())?;
            Ok(Verdict::Complete { rank: r, checks: rp.checks })
        }
    }
}
