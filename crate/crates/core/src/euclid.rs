//! Matrix diagonalization over Euclidean-style rings: ℤ, the coefficient
//! ring itself, and univariate polynomials R[t].
//!
//! For ℤ[t] the division step is greedy and can stall; callers receive
//! [`Stalled`] instead of a wrong answer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Coeff, CoeffRing};

/// Ring operations plus a size function the elimination decreases.
pub trait EuclidCtx {
    type E: Clone + fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Strictly smaller remainders have strictly smaller size.
    fn size(&self, a: &Self::E) -> (usize, BigInt);
    /// Best-effort division: `a = q*b + r`. `r` need not be smaller than `b`.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// A unit u and its inverse with u·a in a normal form (monic, say).
    fn normalizer(&self, _a: &Self::E) -> Option<(Self::E, Self::E)> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stalled;

impl fmt::Display for Stalled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "elimination stalled: no remainder of smaller size")
    }
}

pub type Mat<E> = Vec<Vec<E>>;

/// Result of `X * M * Y = D` with X, Y invertible and D diagonal.
#[derive(Debug, Clone)]
pub struct Diagonalized<E> {
    pub x: Mat<E>,
    pub x_inv: Mat<E>,
    pub y: Mat<E>,
    pub y_inv: Mat<E>,
    pub diag: Vec<E>,
}

fn identity<C: EuclidCtx>(ctx: &C, n: usize) -> Mat<C::E> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }).collect())
        .collect()
}

struct Work<'a, C: EuclidCtx> {
    ctx: &'a C,
    m: Mat<C::E>,
    x: Mat<C::E>,
    x_inv: Mat<C::E>,
    y: Mat<C::E>,
    y_inv: Mat<C::E>,
}

impl<C: EuclidCtx> Work<'_, C> {
    // row_a += q * row_b ; X tracks row ops, X⁻¹ the inverse column ops
    fn row_axpy(&mut self, a: usize, b: usize, q: &C::E) {
        let ctx = self.ctx;
        for j in 0..self.m[0].len() {
            let t = ctx.mul(q, &self.m[b][j]);
            self.m[a][j] = ctx.add(&self.m[a][j], &t);
        }
        for j in 0..self.x.len() {
            let t = ctx.mul(q, &self.x[b][j]);
            self.x[a][j] = ctx.add(&self.x[a][j], &t);
        }
        for i in 0..self.x_inv.len() {
            let t = ctx.mul(q, &self.x_inv[i][a]);
            self.x_inv[i][b] = ctx.sub(&self.x_inv[i][b], &t);
        }
    }
    fn col_axpy(&mut self, a: usize, b: usize, q: &C::E) {
        let ctx = self.ctx;
        for i in 0..self.m.len() {
            let t = ctx.mul(q, &self.m[i][b]);
            self.m[i][a] = ctx.add(&self.m[i][a], &t);
        }
        for i in 0..self.y.len() {
            let t = ctx.mul(q, &self.y[i][b]);
            self.y[i][a] = ctx.add(&self.y[i][a], &t);
        }
        for j in 0..self.y_inv.len() {
            let t = ctx.mul(q, &self.y_inv[a][j]);
            self.y_inv[b][j] = ctx.sub(&self.y_inv[b][j], &t);
        }
    }
    /// Euclid down column t from the pivot (t, t), which stays nonzero.
    fn clear_column(&mut self, t: usize) -> Result<(), Stalled> {
        let ctx = self.ctx;
        loop {
            let p = (t..self.m.len()).filter(|&i| !ctx.is_zero(&self.m[i][t])).min_by_key(|&i| ctx.size(&self.m[i][t])).expect("nonzero pivot");
            self.swap_rows(t, p);
            if let Some((u, u_inv)) = ctx.normalizer(&self.m[t][t]) {
                self.scale_row(t, &u, &u_inv);
            }
            let mut clean = true;
            for i in t + 1..self.m.len() {
                if ctx.is_zero(&self.m[i][t]) {
                    continue;
                }
                let (q, r) = ctx.div_rem(&self.m[i][t], &self.m[t][t]);
                self.row_axpy(i, t, &ctx.neg(&q));
                if !ctx.is_zero(&r) {
                    if ctx.size(&r) >= ctx.size(&self.m[t][t]) {
                        return Err(Stalled);
                    }
                    clean = false;
                }
            }
            if clean {
                return Ok(());
            }
        }
    }

    /// Euclid along row t; false if the pivot was replaced.
    fn clear_row(&mut self, t: usize) -> Result<bool, Stalled> {
        let ctx = self.ctx;
        let mut kept = true;
        loop {
            let cols = self.m[t].len();
            let p = (t..cols).filter(|&j| !ctx.is_zero(&self.m[t][j])).min_by_key(|&j| ctx.size(&self.m[t][j])).expect("nonzero pivot");
            if p != t {
                self.swap_cols(t, p);
                kept = false;
            }
            let mut clean = true;
            for j in t + 1..cols {
                if ctx.is_zero(&self.m[t][j]) {
                    continue;
                }
                let (q, r) = ctx.div_rem(&self.m[t][j], &self.m[t][t]);
                self.col_axpy(j, t, &ctx.neg(&q));
                if !ctx.is_zero(&r) {
                    if ctx.size(&r) >= ctx.size(&self.m[t][t]) {
                        return Err(Stalled);
                    }
                    clean = false;
                }
            }
            if clean {
                return Ok(kept);
            }
        }
    }

    // row_a *= u, u a unit with inverse u_inv
    fn scale_row(&mut self, a: usize, u: &C::E, u_inv: &C::E) {
        let ctx = self.ctx;
        for v in self.m[a].iter_mut().chain(self.x[a].iter_mut()) {
            *v = ctx.mul(u, v);
        }
        for row in self.x_inv.iter_mut() {
            row[a] = ctx.mul(&row[a], u_inv);
        }
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        self.x.swap(a, b);
        for row in self.x_inv.iter_mut() {
            row.swap(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.m.iter_mut() {
            row.swap(a, b);
        }
        for row in self.y.iter_mut() {
            row.swap(a, b);
        }
        self.y_inv.swap(a, b);
    }
}

/// Diagonalizes `m` by invertible row and column operations.
///
/// With `chain`, successive diagonal entries also divide each other (a Smith
/// form); this needs exact remainders and is used over ℤ and fields.
pub fn diagonalize<C: EuclidCtx>(ctx: &C, m: &Mat<C::E>, chain: bool) -> Result<Diagonalized<C::E>, Stalled> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut w = Work {
        ctx,
        m: m.clone(),
        x: identity(ctx, rows),
        x_inv: identity(ctx, rows),
        y: identity(ctx, cols),
        y_inv: identity(ctx, cols),
    };
    let k = rows.min(cols);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        // pivot: smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize, (usize, BigInt))> = None;
        for i in t..rows {
            for j in t..cols {
                if !ctx.is_zero(&w.m[i][j]) {
                    let s = ctx.size(&w.m[i][j]);
                    if best.as_ref().map_or(true, |b| s < b.2) {
                        best = Some((i, j, s));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            w.clear_column(t)?;
            if !w.clear_row(t)? {
                // the pivot shrank; the column may be dirty again
                continue;
            }
            if chain {
                // pull in an entry the pivot does not divide
                let mut fix = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !ctx.is_zero(&w.m[i][j]) {
                            let (_, r) = ctx.div_rem(&w.m[i][j], &w.m[t][t]);
                            if !ctx.is_zero(&r) {
                                fix = Some(i);
                                break 'scan;
                            }
                        }
                    }
                }
                if let Some(i) = fix {
                    let one = ctx.one();
                    w.row_axpy(t, i, &one);
                    continue;
                }
            }
            break;
        }
        diag.push(w.m[t][t].clone());
    }
    Ok(Diagonalized { x: w.x, x_inv: w.x_inv, y: w.y, y_inv: w.y_inv, diag })
}

/// `X` invertible with the last `rows − rank` rows of X·M zero.
#[derive(Debug, Clone)]
pub struct RowEchelon<E> {
    pub x: Mat<E>,
    pub x_inv: Mat<E>,
    pub rank: usize,
}

/// Row echelon form by row operations only. Each column is cleared by a
/// Euclidean remainder sequence whose pivots are normalized, which keeps
/// entry growth in check where [`diagonalize`] can blow up.
pub fn row_echelon<C: EuclidCtx>(ctx: &C, m: &Mat<C::E>) -> Result<RowEchelon<C::E>, Stalled> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut w = Work { ctx, m: m.clone(), x: identity(ctx, rows), x_inv: identity(ctx, rows), y: vec![], y_inv: vec![] };
    let mut rank = 0;
    for c in 0..cols {
        loop {
            let best = (rank..rows).filter(|&i| !ctx.is_zero(&w.m[i][c])).min_by_key(|&i| ctx.size(&w.m[i][c]));
            let Some(p) = best else { break };
            w.swap_rows(rank, p);
            if let Some((u, u_inv)) = ctx.normalizer(&w.m[rank][c]) {
                w.scale_row(rank, &u, &u_inv);
            }
            let mut clean = true;
            for i in rank + 1..rows {
                if ctx.is_zero(&w.m[i][c]) {
                    continue;
                }
                let (q, r) = ctx.div_rem(&w.m[i][c], &w.m[rank][c]);
                w.row_axpy(i, rank, &ctx.neg(&q));
                if !ctx.is_zero(&r) {
                    if ctx.size(&r) >= ctx.size(&w.m[rank][c]) {
                        return Err(Stalled);
                    }
                    clean = false;
                }
            }
            if clean {
                rank += 1;
                break;
            }
        }
        if rank == rows {
            break;
        }
    }
    Ok(RowEchelon { x: w.x, x_inv: w.x_inv, rank })
}

/// Smith form over ℤ with non-negative diagonal.
pub fn smith_int(m: &Mat<BigInt>) -> Diagonalized<BigInt> {
    let ctx = IntCtx;
    let mut out = diagonalize(&ctx, m, true).expect("ℤ is Euclidean");
    for (t, d) in out.diag.iter_mut().enumerate() {
        if d.is_negative() {
            *d = -d.clone();
            for v in out.x[t].iter_mut() {
                *v = -v.clone();
            }
            for row in out.x_inv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
    out
}

pub struct IntCtx;

impl EuclidCtx for IntCtx {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn size(&self, a: &BigInt) -> (usize, BigInt) {
        (0, a.abs())
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_mod_floor(b)
    }
}

/// Scalars of a coefficient ring: exact division in fields, floor division in ℤ.
pub struct ScalarCtx {
    pub ring: CoeffRing,
}

impl EuclidCtx for ScalarCtx {
    type E = Coeff;
    fn zero(&self) -> Coeff {
        Coeff::zero()
    }
    fn one(&self) -> Coeff {
        Coeff::one().in_ring(&self.ring)
    }
    fn is_zero(&self, a: &Coeff) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        a + b
    }
    fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        a - b
    }
    fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        a * b
    }
    fn neg(&self, a: &Coeff) -> Coeff {
        -a.clone()
    }
    fn size(&self, a: &Coeff) -> (usize, BigInt) {
        if self.ring.is_field() {
            (0, BigInt::from(u8::from(!a.is_zero())))
        } else {
            (0, a.abs_int())
        }
    }
    fn div_rem(&self, a: &Coeff, b: &Coeff) -> (Coeff, Coeff) {
        if self.ring.is_field() {
            (a.clone() * b.inv().expect("nonzero divisor"), Coeff::zero())
        } else {
            let (q, r) = a.to_bigint().div_mod_floor(&b.to_bigint());
            (Coeff::from_int(q), Coeff::from_int(r))
        }
    }
    fn normalizer(&self, a: &Coeff) -> Option<(Coeff, Coeff)> {
        let u = unit_normalizer(&self.ring, a)?;
        Some((u.clone(), u.inv()?.in_ring(&self.ring)))
    }
}

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub c: Vec<Coeff>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { c: vec![] }
    }
    pub fn constant(a: Coeff) -> UniPoly {
        UniPoly { c: vec![a] }.trim()
    }
    pub fn monomial(a: Coeff, deg: usize) -> UniPoly {
        let mut c = vec![Coeff::zero(); deg];
        c.push(a);
        UniPoly { c }.trim()
    }
    pub fn trim(mut self) -> UniPoly {
        while self.c.last().map_or(false, |a| a.is_zero()) {
            self.c.pop();
        }
        self
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn lc(&self) -> Option<&Coeff> {
        self.c.last()
    }
    /// Order of vanishing at t = 0.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }
    pub fn shift_down(&self, k: usize) -> UniPoly {
        UniPoly { c: self.c[k.min(self.c.len())..].to_vec() }.trim()
    }
    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                _ => unreachable!(),
            })
            .collect();
        UniPoly { c }.trim()
    }
    pub fn neg(&self) -> UniPoly {
        UniPoly { c: self.c.iter().map(|a| -a.clone()).collect() }
    }
    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Coeff::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UniPoly { c }.trim()
    }
    pub fn scale(&self, a: &Coeff) -> UniPoly {
        UniPoly { c: self.c.iter().map(|x| x * a).collect() }.trim()
    }
    pub fn pow(&self, k: usize) -> UniPoly {
        let mut r = UniPoly::constant(Coeff::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Division with remainder; over ℤ leading coefficients are divided with
    /// floor, so the remainder may keep the divisor's degree.
    pub fn div_rem(&self, b: &UniPoly, ring: &CoeffRing) -> (UniPoly, UniPoly) {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.lc().unwrap().clone();
        let mut q = UniPoly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lc().unwrap().clone();
            let factor = if ring.is_field() {
                lr * lb.inv().unwrap()
            } else {
                let (f, _) = lr.to_bigint().div_mod_floor(&lb.to_bigint());
                if f.is_zero() {
                    break;
                }
                Coeff::from_int(f)
            };
            let t = UniPoly::monomial(factor, dr - db);
            let before = r.degree();
            r = r.sub(&t.mul(b));
            q = q.add(&t);
            if ring.is_field() || r.degree() < before {
                continue;
            }
            // ℤ: leading coefficient shrank but degree stayed; another pass
            // either finishes it or the floor quotient becomes 0
        }
        (q, r)
    }

    /// Exact quotient, if `b` divides `self` in R[t].
    pub fn div_exact(&self, b: &UniPoly, ring: &CoeffRing) -> Option<UniPoly> {
        let (q, r) = self.div_rem(b, ring);
        if r.is_zero() && q.c.iter().all(|a| ring.contains(a)) {
            Some(q)
        } else {
            None
        }
    }

    pub fn eval_zero(&self) -> Coeff {
        self.c.first().cloned().unwrap_or_else(Coeff::zero)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("{a}*t^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub struct PolyCtx {
    pub ring: CoeffRing,
}

impl EuclidCtx for PolyCtx {
    type E = UniPoly;
    fn zero(&self) -> UniPoly {
        UniPoly::zero()
    }
    fn one(&self) -> UniPoly {
        UniPoly::constant(Coeff::one().in_ring(&self.ring))
    }
    fn is_zero(&self, a: &UniPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.add(b)
    }
    fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.sub(b)
    }
    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.mul(b)
    }
    fn neg(&self, a: &UniPoly) -> UniPoly {
        a.neg()
    }
    fn size(&self, a: &UniPoly) -> (usize, BigInt) {
        let d = a.degree().unwrap_or(0);
        if self.ring.is_field() {
            (d, BigInt::zero())
        } else {
            (d, a.lc().map_or_else(BigInt::zero, |c| c.abs_int()))
        }
    }
    fn div_rem(&self, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
        a.div_rem(b, &self.ring)
    }
    fn normalizer(&self, a: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let u = unit_normalizer(&self.ring, a.lc()?)?;
        Some((UniPoly::constant(u.clone()), UniPoly::constant(u.inv()?.in_ring(&self.ring))))
    }
}

/// u with u·c = 1 in a field and u·c = |c| for c = ±1 in ℤ.
fn unit_normalizer(ring: &CoeffRing, c: &Coeff) -> Option<Coeff> {
    if ring.is_field() {
        c.inv().map(|u| u.in_ring(ring))
    } else if c.abs_int().is_one() {
        Some(c.clone())
    } else {
        None
    }
}

/// t^val·p in R[t^{±1}] with p(0) ≠ 0 (or p = 0 and val = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub val: i64,
    pub p: UniPoly,
}

impl Laurent {
    pub fn new(val: i64, p: UniPoly) -> Laurent {
        if p.is_zero() {
            return Laurent { val: 0, p };
        }
        let v = p.valuation();
        Laurent { val: val + v as i64, p: p.shift_down(v) }
    }

    pub fn t_pow(k: i64, one: Coeff) -> Laurent {
        Laurent { val: k, p: UniPoly::constant(one) }
    }

    /// Both operands written over the common least exponent.
    fn aligned(&self, o: &Laurent) -> (i64, UniPoly, UniPoly) {
        let v = self.val.min(o.val);
        let up = |x: &Laurent| if x.p.is_zero() { UniPoly::zero() } else { x.p.mul(&UniPoly::monomial(Coeff::one(), (x.val - v) as usize)) };
        (v, up(self), up(o))
    }
}

/// One-variable Laurent polynomials; t is a unit, so sizes ignore the
/// valuation.
pub struct LaurentCtx {
    pub ring: CoeffRing,
}

impl EuclidCtx for LaurentCtx {
    type E = Laurent;
    fn zero(&self) -> Laurent {
        Laurent { val: 0, p: UniPoly::zero() }
    }
    fn one(&self) -> Laurent {
        Laurent::t_pow(0, Coeff::one().in_ring(&self.ring))
    }
    fn is_zero(&self, a: &Laurent) -> bool {
        a.p.is_zero()
    }
    fn add(&self, a: &Laurent, b: &Laurent) -> Laurent {
        let (v, x, y) = a.aligned(b);
        Laurent::new(v, x.add(&y))
    }
    fn sub(&self, a: &Laurent, b: &Laurent) -> Laurent {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Laurent, b: &Laurent) -> Laurent {
        Laurent::new(a.val + b.val, a.p.mul(&b.p))
    }
    fn neg(&self, a: &Laurent) -> Laurent {
        Laurent { val: a.val, p: a.p.neg() }
    }
    fn size(&self, a: &Laurent) -> (usize, BigInt) {
        PolyCtx { ring: self.ring }.size(&a.p)
    }
    fn div_rem(&self, a: &Laurent, b: &Laurent) -> (Laurent, Laurent) {
        let (q, r) = a.p.div_rem(&b.p, &self.ring);
        (Laurent::new(a.val - b.val, q), Laurent::new(a.val, r))
    }
    fn normalizer(&self, a: &Laurent) -> Option<(Laurent, Laurent)> {
        let one = Coeff::one().in_ring(&self.ring);
        let u = unit_normalizer(&self.ring, a.p.lc()?).unwrap_or_else(|| one.clone());
        let u_inv = u.inv()?.in_ring(&self.ring);
        Some((Laurent { val: -a.val, p: UniPoly::constant(u) }, Laurent { val: a.val, p: UniPoly::constant(u_inv) }))
    }
}

/// Product of two matrices over a context.
pub fn mat_mul<C: EuclidCtx>(ctx: &C, a: &Mat<C::E>, b: &Mat<C::E>) -> Mat<C::E> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = ctx.zero();
                    for l in 0..k {
                        s = ctx.add(&s, &ctx.mul(&a[i][l], &b[l][j]));
                    }
                    s
                })
                .collect()
        })
        .collect()
}
