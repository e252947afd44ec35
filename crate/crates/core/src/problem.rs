//! Problem files: one JSON document declaring R, L, σ, P, ψ and optionally
//! a module. Nothing is defaulted; the file alone reproduces a certificate.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::graded_algebra::ToricGAlgebra;
use crate::graded_linalg::{mat, ElemMat, GradedMatrix};
use crate::lattice::{to_small, FinAbGroup, GroupElem, IntMat};
use crate::scalar::CoeffRing;
use crate::trivializer::{GActionProblem, ModuleSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    /// "QQ", "ZZ" or "GF(p)".
    pub coefficients: String,
    pub lattice_rank: usize,
    pub cone: ConeSpec,
    pub group: GroupSpec,
    /// One row per generator of P (torsion first), one column per lattice coordinate.
    pub psi: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeSpec {
    Rays(Vec<Vec<i64>>),
    /// Rows a with σ = {m : a·m ≥ 0}.
    Inequalities(Vec<Vec<i64>>),
}

/// ℤ^free_rank ⊕ ⊕ ℤ/d_i with d_1 | d_2 | …, every d_i > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleFile {
    /// Weights of a free module.
    Free(Vec<Vec<i64>>),
    Idempotent(IdempotentFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdempotentFile {
    pub weights: Vec<Vec<i64>>,
    pub entries: Vec<Vec<String>>,
}

/// A parsed and validated problem.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: ProblemFile,
    pub alg: ToricGAlgebra,
    pub module: Option<ModuleSpec>,
}

impl Loaded {
    pub fn problem(&self) -> Result<GActionProblem> {
        let module = self.module.clone().ok_or_else(|| Error::Validation("the problem file declares no module".into()))?;
        Ok(GActionProblem { alg: self.alg.clone(), module })
    }
}

fn location(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

impl ProblemFile {
    /// The file describing an in-memory problem (rays of σ as the cone).
    pub fn describe(alg: &ToricGAlgebra, module: Option<&ModuleSpec>) -> ProblemFile {
        let small = |v: &[BigInt]| to_small(v).expect("small integers");
        let weights = |ws: &[GroupElem]| ws.iter().map(|w| small(&w.coords())).collect::<Vec<_>>();
        ProblemFile {
            version: FORMAT_VERSION,
            coefficients: alg.coeff.name(),
            lattice_rank: alg.rank(),
            cone: ConeSpec::Rays(alg.cone().rays().iter().map(|r| small(r)).collect()),
            group: GroupSpec {
                free_rank: alg.group.free_rank,
                torsion: alg.group.torsion.iter().map(|d| d.to_u64().expect("small torsion")).collect(),
            },
            psi: alg.psi.to_rows().iter().map(|r| small(r)).collect(),
            module: module.map(|m| match m {
                ModuleSpec::Free(ws) => ModuleFile::Free(weights(ws)),
                ModuleSpec::Idempotent(e) => {
                    ModuleFile::Idempotent(IdempotentFile { weights: weights(&e.source), entries: mat::render(&e.entries) })
                }
            }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<ProblemFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
    }

    /// sha256 of the compact JSON with sorted keys.
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("problem files serialize");
        hex::encode(Sha256::digest(value.to_string().as_bytes()))
    }

    pub fn coeff_ring(&self) -> Result<CoeffRing> {
        let s = self.coefficients.trim();
        match s {
            "QQ" => Ok(CoeffRing::QQ),
            "ZZ" => Ok(CoeffRing::ZZ),
            _ => {
                let p = s
                    .strip_prefix("GF(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.trim().parse::<u64>().ok())
                    .ok_or_else(|| Error::Validation(format!("unknown coefficient ring {s:?}; use QQ, ZZ or GF(p)")))?;
                CoeffRing::gf(p).map_err(Error::Validation)
            }
        }
    }

    fn group(&self) -> Result<FinAbGroup> {
        let orders: Vec<BigInt> = self.group.torsion.iter().map(|&d| BigInt::from(d)).collect();
        let g = FinAbGroup::new(self.group.free_rank, &orders).map_err(Error::Validation)?;
        if g.torsion != orders {
            let canon: Vec<String> = g.torsion.iter().map(|d| d.to_string()).collect();
            return Err(Error::Validation(format!(
                "torsion must be given by invariant factors d_1 | d_2 | … > 1; this group is [{}]",
                canon.join(", ")
            )));
        }
        Ok(g)
    }

    fn weight(&self, g: &FinAbGroup, w: &[i64], what: &str) -> Result<GroupElem> {
        if w.len() != g.ngens() {
            return Err(Error::Validation(format!("{what} has {} coordinates, the group has {} generators", w.len(), g.ngens())));
        }
        Ok(g.reduce(&w.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()))
    }

    /// Builds the algebra and module. `text` locates malformed entries.
    pub fn load(self, text: &str, budget: Option<u64>) -> Result<Loaded> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Validation(format!("unsupported version {}; expected {FORMAT_VERSION}", self.version)));
        }
        let coeff = self.coeff_ring()?;
        let d = self.lattice_rank;
        if d == 0 {
            return Err(Error::Validation("lattice_rank must be positive".into()));
        }
        let check_rows = |rows: &[Vec<i64>], what: &str| -> Result<()> {
            match rows.iter().position(|r| r.len() != d) {
                Some(i) => Err(Error::Validation(format!("{what} {i} has length {}, expected {d}", rows[i].len()))),
                None => Ok(()),
            }
        };
        let cone = match &self.cone {
            ConeSpec::Rays(r) => {
                check_rows(r, "ray")?;
                Cone::from_rays_i64(d, r)?
            }
            ConeSpec::Inequalities(r) => {
                check_rows(r, "inequality")?;
                let big: Vec<Vec<BigInt>> = r.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
                Cone::from_inequalities(d, &big)?
            }
        };
        let group = self.group()?;
        if self.psi.len() != group.ngens() {
            return Err(Error::Validation(format!("psi has {} rows, the group has {} generators", self.psi.len(), group.ngens())));
        }
        check_rows(&self.psi, "psi row")?;
        let rows: Vec<&[i64]> = self.psi.iter().map(|r| r.as_slice()).collect();
        let mut alg = ToricGAlgebra::new(coeff, cone, group.clone(), IntMat::from_i64(&rows))?;
        if let Some(b) = budget {
            alg = alg.with_budget(b);
        }
        let module = match &self.module {
            None => None,
            Some(ModuleFile::Free(ws)) => {
                let ws = ws.iter().enumerate().map(|(i, w)| self.weight(&group, w, &format!("weight {i}"))).collect::<Result<_>>()?;
                Some(ModuleSpec::Free(ws))
            }
            Some(ModuleFile::Idempotent(f)) => {
                let n = f.weights.len();
                let ws: Vec<GroupElem> =
                    f.weights.iter().enumerate().map(|(i, w)| self.weight(&group, w, &format!("weight {i}"))).collect::<Result<_>>()?;
                if f.entries.len() != n || f.entries.iter().any(|r| r.len() != n) {
                    return Err(Error::Validation(format!("the idempotent must be {n}×{n} to match its weights")));
                }
                let mut entries: ElemMat = vec![];
                for row in &f.entries {
                    let mut out = vec![];
                    for s in row {
                        out.push(alg.parse(s).map_err(|e| {
                            let quoted = serde_json::to_string(s).expect("strings serialize");
                            let (line, column) = text.find(&quoted).map_or((0, 0), |o| location(text, o + 1));
                            Error::Parse { line, column, message: format!("entry {quoted}: {e}") }
                        })?);
                    }
                    entries.push(out);
                }
                // an ill-graded matrix is bad input, not a failed computation
                let e = GradedMatrix::new(&alg, ws.clone(), ws, entries).map_err(|e| match e {
                    Error::WeightMismatch(m) | Error::StructuralViolation(m) => Error::Validation(m),
                    other => other,
                })?;
                Some(ModuleSpec::Idempotent(e))
            }
        };
        Ok(Loaded { file: self, alg, module })
    }
}

/// Parses and validates in one go.
pub fn load_problem(text: &str, budget: Option<u64>) -> Result<Loaded> {
    ProblemFile::parse(text)?.load(text, budget)
}
