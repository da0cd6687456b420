//! The Fefferman functional, the defect `F = log J`, and the iterative
//! approximate Kähler-Einstein defining functions `phi^(1), .., phi^(n+1)`.
//!
//! Potentials are expression DAGs over a polynomial leaf. Each `J` node eats
//! two orders of its argument, so a request for order `K` at the root needs the
//! leaf at order `K + 2 * depth`, where `depth` is the deepest nesting of `J`
//! nodes. Shared sub-expressions are evaluated once per call.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::jets::{jet_determinant, AnalyticFn, JetSource, JetSpace, Wirtinger, WirtingerJet};
use crate::kahler::complex_hessian;

/// `J(psi) = (-1)^n det [[psi, psi_jbar], [psi_i, psi_{i jbar}]]`, two orders
/// below its argument.
pub fn fefferman_j(psi: &WirtingerJet) -> Result<WirtingerJet> {
    if psi.order() < 2 {
        return Err(Error::InsufficientOrder { required: 2, available: psi.order() });
    }
    let n = psi.n();
    let k = psi.order() - 2;
    let mut rows = Vec::with_capacity(n + 1);
    let mut first = vec![psi.truncate(k)?];
    let mut holo = Vec::with_capacity(n);
    for j in 0..n {
        first.push(psi.partial_shift(j, Wirtinger::Antiholomorphic)?.truncate(k)?);
        holo.push(psi.partial_shift(j, Wirtinger::Holomorphic)?);
    }
    rows.push(first);
    for d in &holo {
        let mut row = vec![d.truncate(k)?];
        for j in 0..n {
            row.push(d.partial_shift(j, Wirtinger::Antiholomorphic)?);
        }
        rows.push(row);
    }
    let det = jet_determinant(&rows)?;
    Ok(if n % 2 == 1 { det.neg() } else { det })
}

/// `|J(psi) - psi^(n+1) det((-log psi)_{i jbar})|` at the base point.
pub fn j_identity_residual(psi: &WirtingerJet) -> Result<f64> {
    let v = psi.value().re;
    if v <= 0.0 {
        return Err(Error::NonpositiveValue { value: v });
    }
    let j = fefferman_j(psi)?.value();
    let hess = complex_hessian(&psi.ln()?.neg())?;
    let rhs = hess.det() * v.powi(psi.n() as i32 + 1);
    Ok((j - rhs).norm())
}

/// `F = log J(psi)`.
pub fn defect_from_j(j: &WirtingerJet) -> Result<WirtingerJet> {
    let v = j.value();
    if v.re <= 0.0 {
        return Err(Error::NonpositiveJ { value: v.re });
    }
    j.ln()
}

#[derive(Debug)]
enum Node {
    Leaf(Arc<DomainSpec>),
    Const(f64),
    Add(PotentialExpr, PotentialExpr),
    Mul(PotentialExpr, PotentialExpr),
    Neg(PotentialExpr),
    Scale(f64, PotentialExpr),
    Analytic(AnalyticFn, PotentialExpr),
    FeffermanJ(PotentialExpr),
}

/// Immutable expression over one polynomial defining function.
#[derive(Debug, Clone)]
pub struct PotentialExpr {
    node: Arc<Node>,
    n: usize,
    depth: usize,
}

impl PotentialExpr {
    fn make(node: Node, n: usize, depth: usize) -> Self {
        Self { node: Arc::new(node), n, depth }
    }

    pub fn leaf(spec: DomainSpec) -> Self {
        let n = spec.n();
        Self::make(Node::Leaf(Arc::new(spec)), n, 0)
    }

    /// Constant in dimension `n`.
    pub fn constant(n: usize, c: f64) -> Self {
        Self::make(Node::Const(c), n, 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::make(Node::Add(self.clone(), other.clone()), self.n, self.depth.max(other.depth))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::make(Node::Mul(self.clone(), other.clone()), self.n, self.depth.max(other.depth))
    }

    pub fn neg(&self) -> Self {
        Self::make(Node::Neg(self.clone()), self.n, self.depth)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::make(Node::Scale(c, self.clone()), self.n, self.depth)
    }

    pub fn add_const(&self, c: f64) -> Self {
        self.add(&Self::constant(self.n, c))
    }

    pub fn analytic(&self, f: AnalyticFn) -> Self {
        Self::make(Node::Analytic(f, self.clone()), self.n, self.depth)
    }

    pub fn ln(&self) -> Self {
        self.analytic(AnalyticFn::Log)
    }

    pub fn powf(&self, r: f64) -> Self {
        self.analytic(AnalyticFn::PowReal(r))
    }

    /// `J(self)`.
    pub fn fefferman_j(&self) -> Self {
        Self::make(Node::FeffermanJ(self.clone()), self.n, self.depth + 1)
    }

    /// `-log(-self)`, the Kähler potential attached to a defining function.
    pub fn neg_log_neg(&self) -> Self {
        self.neg().ln().neg()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Deepest nesting of `J` nodes.
    pub fn j_depth(&self) -> usize {
        self.depth
    }

    /// Leaf order needed for an output of order `order`.
    pub fn required_leaf_order(&self, order: usize) -> usize {
        order + 2 * self.depth
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.node) as usize
    }

    fn demand(&self, order: usize, need: &mut HashMap<usize, usize>) {
        match need.get(&self.key()) {
            Some(&k) if k >= order => return,
            _ => {
                need.insert(self.key(), order);
            }
        }
        match &*self.node {
            Node::Leaf(_) | Node::Const(_) => {}
            Node::Add(a, b) | Node::Mul(a, b) => {
                a.demand(order, need);
                b.demand(order, need);
            }
            Node::Neg(a) | Node::Scale(_, a) | Node::Analytic(_, a) => a.demand(order, need),
            Node::FeffermanJ(a) => a.demand(order + 2, need),
        }
    }

    fn eval(
        &self,
        space: &Arc<JetSpace>,
        p: &[Complex64],
        need: &HashMap<usize, usize>,
        memo: &mut HashMap<usize, WirtingerJet>,
    ) -> Result<WirtingerJet> {
        if let Some(j) = memo.get(&self.key()) {
            return Ok(j.clone());
        }
        let order = need[&self.key()];
        let at = |e: &PotentialExpr, memo: &mut HashMap<usize, WirtingerJet>, k: usize| -> Result<WirtingerJet> {
            e.eval(space, p, need, memo)?.truncate(k)
        };
        let out = match &*self.node {
            Node::Leaf(spec) => spec.jet_in_space(space, p, order)?,
            Node::Const(c) => WirtingerJet::constant(space, order, Complex64::new(*c, 0.0)),
            Node::Add(a, b) => at(a, memo, order)?.add(&at(b, memo, order)?)?,
            Node::Mul(a, b) => at(a, memo, order)?.mul(&at(b, memo, order)?)?,
            Node::Neg(a) => at(a, memo, order)?.neg(),
            Node::Scale(c, a) => at(a, memo, order)?.scale_real(*c),
            Node::Analytic(f, a) => {
                let x = at(a, memo, order)?;
                match x.analytic(*f) {
                    Err(Error::LogOfNonpositive { .. } | Error::DivisionByZeroConstantTerm)
                        if matches!(&*a.node, Node::FeffermanJ(_)) =>
                    {
                        return Err(Error::JNotPositive { value: x.value().re })
                    }
                    r => r?,
                }
            }
            Node::FeffermanJ(a) => fefferman_j(&at(a, memo, order + 2)?)?,
        };
        memo.insert(self.key(), out.clone());
        Ok(out)
    }

    /// Evaluates several expressions at `p` in one pass, sharing common
    /// sub-expressions. Returns jets of the requested orders.
    pub fn evaluate_many(requests: &[(&PotentialExpr, usize)], p: &[Complex64]) -> Result<Vec<WirtingerJet>> {
        let Some((first, _)) = requests.first() else {
            return Ok(Vec::new());
        };
        let n = first.n;
        if p.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: p.len() });
        }
        let mut need = HashMap::new();
        for (e, k) in requests {
            e.demand(*k, &mut need);
        }
        let top = need.values().copied().max().unwrap_or(0);
        let space = JetSpace::shared(n, top);
        let mut memo = HashMap::new();
        requests
            .iter()
            .map(|(e, k)| e.eval(&space, p, &need, &mut memo)?.truncate(*k))
            .collect()
    }

    pub fn evaluate(&self, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        Ok(Self::evaluate_many(&[(self, order)], p)?.pop().expect("one request"))
    }

    /// Value at `p`.
    pub fn value(&self, p: &[Complex64]) -> Result<f64> {
        Ok(self.evaluate(p, 0)?.value().re)
    }
}

impl JetSource for PotentialExpr {
    fn dim(&self) -> usize {
        self.n
    }

    fn space_order(&self, order: usize) -> usize {
        self.required_leaf_order(order)
    }

    fn jet_in_space(&self, space: &Arc<JetSpace>, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        let mut need = HashMap::new();
        self.demand(order, &mut need);
        let top = need.values().copied().max().unwrap_or(0);
        if space.max_order() < top {
            return Err(Error::InsufficientOrder { required: top, available: space.max_order() });
        }
        let mut memo = HashMap::new();
        self.eval(space, p, &need, &mut memo)?.truncate(order)
    }
}

/// One step of the iteration.
#[derive(Debug, Clone)]
pub struct FeffermanLevel {
    pub l: usize,
    /// `phi^(l)`.
    pub expr: PotentialExpr,
    pub spsh_t: f64,
}

impl FeffermanLevel {
    /// The plain defining function as level 0.
    pub fn base(spec: DomainSpec) -> Self {
        Self { l: 0, expr: PotentialExpr::leaf(spec), spsh_t: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.expr.n()
    }

    /// `J(-phi^(l))`.
    pub fn j_expr(&self) -> PotentialExpr {
        self.expr.neg().fefferman_j()
    }

    /// `F = log J(-phi^(l))`.
    pub fn defect_expr(&self) -> PotentialExpr {
        self.j_expr().ln()
    }

    /// `w = -log(-phi^(l))`.
    pub fn kahler_potential(&self) -> PotentialExpr {
        self.expr.neg_log_neg()
    }

    pub fn phi(&self, p: &[Complex64]) -> Result<f64> {
        self.expr.value(p)
    }

    pub fn j_value(&self, p: &[Complex64]) -> Result<f64> {
        Ok(self.j_expr().evaluate(p, 0)?.value().re)
    }

    /// Jet of `F` at `p`; fails with `NonpositiveJ` outside `{J > 0}`.
    pub fn defect_jet(&self, p: &[Complex64], order: usize) -> Result<WirtingerJet> {
        defect_from_j(&self.j_expr().evaluate(p, order)?)
    }

    /// `|1 - J(-phi^(l))| < 1/2`, strictly.
    pub fn region_check(&self, p: &[Complex64]) -> Result<bool> {
        Ok(in_region(self.j_value(p)?))
    }
}

/// Membership test of the working region from a value of `J`.
pub fn in_region(j: f64) -> bool {
    (1.0 - j).abs() < 0.5
}

/// `l (n + 2 - l)`.
pub fn correction_denominator(n: usize, l: usize) -> f64 {
    (l * (n + 2 - l)) as f64
}

/// Levels `1..=l_max` of the iteration
/// `phi^(1) = phi J(-phi)^(-1/(n+1))`,
/// `phi^(l) = phi^(l-1) (1 + (1 - J(-phi^(l-1))) / (l (n + 2 - l)))`.
pub fn iterate(spec: &DomainSpec, l_max: usize) -> Result<Vec<FeffermanLevel>> {
    let n = spec.n();
    if l_max == 0 || l_max > n + 1 {
        return Err(Error::InvalidParameter(format!("level must lie in 1..={}, got {l_max}", n + 1)));
    }
    let phi = PotentialExpr::leaf(spec.clone());
    let first = phi.mul(&phi.neg().fefferman_j().powf(-1.0 / (n + 1) as f64));
    let mut levels = vec![FeffermanLevel { l: 1, expr: first, spsh_t: 0.0 }];
    for l in 2..=l_max {
        let prev = &levels[l - 2].expr;
        let d = correction_denominator(n, l);
        let factor = prev.neg().fefferman_j().scale(-1.0 / d).add_const(1.0 + 1.0 / d);
        levels.push(FeffermanLevel { l, expr: prev.mul(&factor), spsh_t: 0.0 });
    }
    Ok(levels)
}

/// `phi^(l) (1 + t phi^(l))`; `t = 0` leaves the level unchanged.
pub fn spsh_adjust(level: &FeffermanLevel, t: f64) -> Result<FeffermanLevel> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("spsh_t must be a finite value >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(level.clone());
    }
    let e = &level.expr;
    Ok(FeffermanLevel { l: level.l, expr: e.mul(&e.scale(t).add_const(1.0)), spsh_t: level.spsh_t + t })
}
