//! Invariants of small pattern graphs.
//!
//! For a pattern `H` this module computes the exact chromatic number, the
//! 2-density `m2(H) = max (e_F - 1)/(v_F - 2)` over subgraphs with at least
//! two edges, strict 2-balance (the maximum attained only by `H` itself),
//! edge-criticality (some edge removal lowers the chromatic number), and the
//! two derived constants:
//!
//! * `pi(H)`: the leading coefficient of the polynomial `m -> Cop(H, T+)`,
//!   where `T+` is the complete balanced `(chi-1)`-partite graph with parts
//!   of size `m` and one extra edge inside a part, and `Cop` counts copies
//!   (subgraphs isomorphic to `H`).  Every copy must use the extra edge —
//!   a copy avoiding it would sit inside the plain host and admit a proper
//!   `(chi-1)`-colouring — so the polynomial has degree `v_H - 2`.
//! * `theta(H)`: the positive solution of
//!   `(chi-1)^(2-v) * pi * theta^(e-1) = 2 - 1/m2`.
//!
//! Copy counts in the structured host are evaluated by a typing sum rather
//! than vertex-by-vertex search: each pattern vertex maps either to one of
//! the two endpoints of the extra edge or to a generic slot in one of the
//! parts, adjacency constraints are checked pairwise between types, and
//! each valid typing contributes a product of falling factorials for the
//! generic pools.  This is exact, cheap (at most `(r+2)^v` typings), and
//! polynomial in `m` by construction, so the leading coefficient follows by
//! Lagrange interpolation over integer sample points.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest pattern size supported.
pub const MAX_PATTERN_VERTICES: usize = 10;

/// Exact rational with machine-word components; pattern-scale densities
/// stay far below the representable range.
pub type Rational = Ratio<i64>;

/// A pattern graph together with its cached invariants.
#[derive(Clone, Debug)]
pub struct Pattern {
    graph: Graph,
    chi: usize,
    m2: Rational,
    edge_critical: bool,
    strictly_2_balanced: bool,
    pi: Option<BigRational>,
    theta: Option<f64>,
}

impl Pattern {
    /// Builds a pattern and computes all invariants.  The threshold
    /// constants `pi` and `theta` are present only where defined: `pi`
    /// needs a nonbipartite edge-critical pattern, `theta` additionally
    /// strict 2-balance.
    pub fn new(graph: Graph) -> Result<Pattern> {
        if graph.n() < 3 || graph.m() < 2 {
            return Err(Error::parameter(format!(
                "pattern needs at least 3 vertices and 2 edges; got {} and {}",
                graph.n(),
                graph.m()
            )));
        }
        if graph.n() > MAX_PATTERN_VERTICES {
            return Err(Error::parameter(format!(
                "pattern on {} vertices exceeds the supported maximum of {MAX_PATTERN_VERTICES}",
                graph.n()
            )));
        }
        let chi = chromatic_number(&graph);
        let m2 = two_density(&graph)?;
        let edge_critical = is_edge_critical(&graph)?;
        let strictly_2_balanced = is_strictly_2_balanced(&graph)?;
        let pi = if chi >= 3 && edge_critical {
            Some(interpolate_pi(&graph, chi)?)
        } else {
            None
        };
        let theta = match (&pi, strictly_2_balanced) {
            (Some(pi), true) => Some(solve_theta(&graph, chi, m2, pi)?),
            _ => None,
        };
        Ok(Pattern {
            graph,
            chi,
            m2,
            edge_critical,
            strictly_2_balanced,
            pi,
            theta,
        })
    }

    /// Named built-in patterns: `K3`, `K4`, `K5`, `C5`, `C7`.
    pub fn by_name(name: &str) -> Option<Result<Pattern>> {
        let graph = match name {
            "K3" => Graph::complete(3),
            "K4" => Graph::complete(4),
            "K5" => Graph::complete(5),
            "C5" => Graph::cycle(5),
            "C7" => Graph::cycle(7),
            _ => return None,
        };
        Some(graph.and_then(Pattern::new))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of vertices.
    pub fn v(&self) -> usize {
        self.graph.n()
    }

    /// Number of edges.
    pub fn e(&self) -> usize {
        self.graph.m()
    }

    /// Exact chromatic number.
    pub fn chi(&self) -> usize {
        self.chi
    }

    /// Exact 2-density.
    pub fn m2(&self) -> Rational {
        self.m2
    }

    pub fn is_edge_critical(&self) -> bool {
        self.edge_critical
    }

    pub fn is_strictly_2_balanced(&self) -> bool {
        self.strictly_2_balanced
    }

    /// Report of all invariants, with rationals rendered as `"p/q"`.
    pub fn report(&self) -> PatternReport {
        PatternReport {
            v: self.v(),
            e: self.e(),
            chi: self.chi,
            m2: format!("{}/{}", self.m2.numer(), self.m2.denom()),
            edge_critical: self.edge_critical,
            strictly_2_balanced: self.strictly_2_balanced,
            pi: self
                .pi
                .as_ref()
                .map(|p| format!("{}/{}", p.numer(), p.denom())),
            theta: self.theta,
        }
    }
}

/// JSON-serializable report of a pattern's invariants.
#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub v: usize,
    pub e: usize,
    pub chi: usize,
    pub m2: String,
    pub edge_critical: bool,
    pub strictly_2_balanced: bool,
    pub pi: Option<String>,
    pub theta: Option<f64>,
}

/// Exact chromatic number by exhaustive colouring search.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if g.m() == 0 {
        return 1;
    }
    for k in 2..n {
        if colourable(g, k) {
            return k;
        }
    }
    n
}

fn colourable(g: &Graph, k: usize) -> bool {
    fn rec(g: &Graph, k: usize, colours: &mut [u8], v: usize, used: usize) -> bool {
        if v == g.n() {
            return true;
        }
        let earlier = g.neighbours(v) & ((1u64 << v) - 1);
        // Only the lowest unused colour needs trying among fresh colours;
        // colour classes are interchangeable.
        for c in 0..(used + 1).min(k) {
            let mut conflict = false;
            let mut rest = earlier;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if colours[u] == c as u8 {
                    conflict = true;
                    break;
                }
            }
            if !conflict {
                colours[v] = c as u8;
                if rec(g, k, colours, v + 1, used.max(c + 1)) {
                    return true;
                }
            }
        }
        false
    }
    rec(g, k, &mut vec![0u8; g.n()], 0, 0)
}

fn check_density_preconditions(h: &Graph) -> Result<()> {
    if h.n() < 3 || h.m() < 2 {
        return Err(Error::parameter(format!(
            "2-density needs at least 3 vertices and 2 edges; got {} and {}",
            h.n(),
            h.m()
        )));
    }
    Ok(())
}

/// Subset size and induced edge count for every vertex subset with at
/// least 3 vertices and at least 2 induced edges.
fn density_candidates(h: &Graph) -> Vec<(usize, usize)> {
    let n = h.n();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if (mask.count_ones() as usize) < 3 {
            continue;
        }
        let mut edges = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            edges += (h.neighbours(v) & rest).count_ones() as usize;
        }
        if edges >= 2 {
            out.push((mask.count_ones() as usize, edges));
        }
    }
    out
}

/// The 2-density `max (e_F - 1)/(v_F - 2)` over subgraphs with `e_F >= 2`.
///
/// For a fixed vertex set the ratio is maximized by taking every induced
/// edge, so the sweep ranges over vertex subsets only.
pub fn two_density(h: &Graph) -> Result<Rational> {
    check_density_preconditions(h)?;
    let best = density_candidates(h)
        .into_iter()
        .map(|(v, e)| Rational::new(e as i64 - 1, v as i64 - 2))
        .max()
        .expect("the full vertex set qualifies");
    Ok(best)
}

/// True when the 2-density maximum is attained only by `H` itself.
///
/// A proper subgraph on all of `V(H)` missing an edge has a strictly
/// smaller ratio automatically, so only proper vertex subsets need
/// checking.
pub fn is_strictly_2_balanced(h: &Graph) -> Result<bool> {
    check_density_preconditions(h)?;
    let full = Rational::new(h.m() as i64 - 1, h.n() as i64 - 2);
    Ok(density_candidates(h)
        .into_iter()
        .filter(|&(v, _)| v < h.n())
        .all(|(v, e)| Rational::new(e as i64 - 1, v as i64 - 2) < full))
}

/// True when removing some single edge lowers the chromatic number.
pub fn is_edge_critical(h: &Graph) -> Result<bool> {
    if h.m() == 0 {
        return Ok(false);
    }
    let chi = chromatic_number(h);
    for (u, v) in h.edges() {
        let reduced: Vec<(usize, usize)> = h.edges().into_iter().filter(|&e| e != (u, v)).collect();
        let sub = Graph::from_edges(h.n(), &reduced)?;
        if chromatic_number(&sub) < chi {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Visits every injective edge-preserving map of `h` into `host`.
///
/// The image slice is indexed by `h`'s own vertex labels.  Vertices are
/// mapped in BFS order from the highest-degree vertex of each component,
/// so nearly every placement is anchored by an already-mapped neighbour.
pub(crate) fn for_each_embedding(
    h: &Graph,
    host: &Graph,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let hn = h.n();
    if hn == 0 {
        return visit(&[]);
    }
    if host.n() < hn {
        return Ok(());
    }
    let mut order: Vec<usize> = Vec::with_capacity(hn);
    let mut seen = 0u64;
    let mut by_degree: Vec<usize> = (0..hn).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    for &root in &by_degree {
        if seen & (1u64 << root) != 0 {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([root]);
        seen |= 1u64 << root;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb = h.neighbours(v) & !seen;
            while nb != 0 {
                let u = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1u64 << u;
                queue.push_back(u);
            }
        }
    }
    // anchors[k]: neighbours of order[k] already mapped before step k.
    let mut pos = vec![0usize; hn];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let anchors: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut a: Vec<usize> = (0..hn)
                .filter(|&u| h.has_edge(u, v) && pos[u] < pos[v])
                .collect();
            a.sort_by_key(|&u| pos[u]);
            a
        })
        .collect();

    struct Ctx<'a> {
        order: &'a [usize],
        anchors: &'a [Vec<usize>],
        host: &'a Graph,
        image: Vec<usize>,
        used: Vec<bool>,
    }
    fn rec(
        ctx: &mut Ctx<'_>,
        k: usize,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if k == ctx.order.len() {
            return visit(&ctx.image);
        }
        let v = ctx.order[k];
        for cand in 0..ctx.host.n() {
            if ctx.used[cand] {
                continue;
            }
            let anchored = {
                let image = &ctx.image;
                let host = ctx.host;
                ctx.anchors[k]
                    .iter()
                    .all(|&u| host.has_edge(image[u], cand))
            };
            if !anchored {
                continue;
            }
            ctx.image[v] = cand;
            ctx.used[cand] = true;
            rec(ctx, k + 1, visit)?;
            ctx.used[cand] = false;
            ctx.image[v] = usize::MAX;
        }
        Ok(())
    }
    let mut ctx = Ctx {
        order: &order,
        anchors: &anchors,
        host,
        image: vec![usize::MAX; hn],
        used: vec![false; host.n()],
    };
    rec(&mut ctx, 0, visit)
}

/// Number of injective edge-preserving maps of `h` into `host`.
pub(crate) fn count_embeddings(h: &Graph, host: &Graph) -> Result<u64> {
    let mut count = 0u64;
    for_each_embedding(h, host, &mut |_| {
        count += 1;
        Ok(())
    })?;
    Ok(count)
}

/// Order of the automorphism group of `h`.  Edge-preserving self-bijections
/// of a finite graph automatically preserve non-edges, so counting
/// embeddings of `h` into itself counts automorphisms.
pub fn automorphism_count(h: &Graph) -> Result<u64> {
    count_embeddings(h, h)
}

/// Falling factorial `base * (base-1) * ... * (base-len+1)`.
fn falling(base: i64, len: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..len as i64 {
        acc *= BigInt::from(base - i);
    }
    acc
}

const SYM_A: u8 = u8::MAX;
const SYM_B: u8 = u8::MAX - 1;

fn symbols_compatible(x: u8, y: u8) -> bool {
    match (x, y) {
        (SYM_A, SYM_B) | (SYM_B, SYM_A) => true,
        // The special endpoints live in part 0: adjacent to each other and
        // to every other part, but to nothing else in part 0.
        (SYM_A, p) | (p, SYM_A) | (SYM_B, p) | (p, SYM_B) => p != 0,
        (p, q) => p != q,
    }
}

/// Number of injective edge-preserving maps of `h` into the complete
/// balanced `r`-partite host with parts of size `m`, either with one extra
/// edge inside part 0 (`extra_edge`) or plain.
///
/// Each pattern vertex is typed as one extra-edge endpoint (usable once) or
/// a generic slot in a part; a consistent typing with `c_i` generics in
/// part `i` contributes `falling(pool_i, c_i)` per part, where part 0's
/// pool excludes the two special endpoints when they exist.
fn embeddings_into_turan(h: &Graph, r: usize, m: usize, extra_edge: bool) -> BigInt {
    struct Ctx<'a> {
        h: &'a Graph,
        r: usize,
        m: usize,
        extra_edge: bool,
        assignment: Vec<u8>,
        total: BigInt,
    }
    fn leaf(ctx: &mut Ctx<'_>) {
        let mut counts = vec![0usize; ctx.r];
        for &s in &ctx.assignment {
            if s != SYM_A && s != SYM_B {
                counts[s as usize] += 1;
            }
        }
        let mut term = BigInt::one();
        for (part, &c) in counts.iter().enumerate() {
            let pool = if part == 0 && ctx.extra_edge {
                ctx.m as i64 - 2
            } else {
                ctx.m as i64
            };
            term *= falling(pool, c);
        }
        ctx.total += term;
    }
    fn try_sym(ctx: &mut Ctx<'_>, v: usize, s: u8, a_used: bool, b_used: bool) {
        let mut rest = ctx.h.neighbours(v) & ((1u64 << v) - 1);
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !symbols_compatible(ctx.assignment[u], s) {
                return;
            }
        }
        ctx.assignment[v] = s;
        rec(ctx, v + 1, a_used || s == SYM_A, b_used || s == SYM_B);
    }
    fn rec(ctx: &mut Ctx<'_>, v: usize, a_used: bool, b_used: bool) {
        if v == ctx.h.n() {
            leaf(ctx);
            return;
        }
        for p in 0..ctx.r as u8 {
            try_sym(ctx, v, p, a_used, b_used);
        }
        if ctx.extra_edge {
            if !a_used {
                try_sym(ctx, v, SYM_A, a_used, b_used);
            }
            if !b_used {
                try_sym(ctx, v, SYM_B, a_used, b_used);
            }
        }
    }
    let mut ctx = Ctx {
        h,
        r,
        m,
        extra_edge,
        assignment: vec![0u8; h.n()],
        total: BigInt::zero(),
    };
    rec(&mut ctx, 0, false, false);
    ctx.total
}

fn embeddings_to_copies(embeddings: BigInt, aut: u64) -> Result<BigInt> {
    let (copies, rem) = num_integer::Integer::div_rem(&embeddings, &BigInt::from(aut));
    if !rem.is_zero() {
        return Err(Error::contract(
            "embedding count not divisible by the automorphism count",
        ));
    }
    Ok(copies)
}

/// Exact number of copies (subgraphs isomorphic to `H`) in the complete
/// balanced `r`-partite graph with parts of size `m` plus one extra edge
/// inside a part.  Requires `r = chi(H) - 1` and `m >= v_H`.
pub fn cop_in_turan_plus(h: &Pattern, r: usize, m: usize) -> Result<u64> {
    if r + 1 != h.chi() {
        return Err(Error::parameter(format!(
            "host part count {r} must be chi(H)-1 = {}",
            h.chi() - 1
        )));
    }
    if m < h.v() {
        return Err(Error::parameter(format!(
            "part size {m} smaller than the pattern order {}",
            h.v()
        )));
    }
    let copies = embeddings_to_copies(
        embeddings_into_turan(h.graph(), r, m, true),
        automorphism_count(h.graph())?,
    )?;
    copies
        .to_u64()
        .ok_or_else(|| Error::too_large("copy count exceeds u64"))
}

/// Exact number of copies of `H` in the plain host without the extra edge;
/// zero whenever `r < chi(H)`.
pub fn cop_in_turan(h: &Pattern, r: usize, m: usize) -> Result<u64> {
    let copies = embeddings_to_copies(
        embeddings_into_turan(h.graph(), r, m, false),
        automorphism_count(h.graph())?,
    )?;
    copies
        .to_u64()
        .ok_or_else(|| Error::too_large("copy count exceeds u64"))
}

/// Multiplies the coefficient vector `poly` by `(x - root)` in place.
fn multiply_by_linear(poly: &mut Vec<BigRational>, root: i64) {
    let root = BigRational::from(BigInt::from(root));
    poly.push(BigRational::zero());
    for t in (0..poly.len()).rev() {
        let lower = if t == 0 {
            BigRational::zero()
        } else {
            poly[t - 1].clone()
        };
        poly[t] = lower - &root * &poly[t];
    }
}

/// Coefficients (degree order) of the unique polynomial of degree
/// `< points.len()` through the given integer points.
fn interpolate_polynomial(points: &[(i64, BigInt)]) -> Vec<BigRational> {
    let k = points.len();
    let mut coeffs = vec![BigRational::zero(); k];
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                multiply_by_linear(&mut basis, *xj);
                denom *= BigRational::from(BigInt::from(*xi - *xj));
            }
        }
        let scale = BigRational::from(yi.clone()) / denom;
        for (t, b) in basis.iter().enumerate() {
            coeffs[t] += b * &scale;
        }
    }
    coeffs
}

fn evaluate_polynomial(coeffs: &[BigRational], x: i64) -> BigRational {
    let x = BigRational::from(BigInt::from(x));
    let mut val = BigRational::zero();
    for c in coeffs.iter().rev() {
        val = val * &x + c;
    }
    val
}

/// Leading coefficient of `m -> Cop(H, host(m))`, by exact interpolation at
/// `m = v_H .. 2 v_H - 1`.  The polynomial has degree `v_H - 2`, so the
/// extra sample doubles as a degree self-check, and the fitted polynomial
/// is re-evaluated against every sample.
fn interpolate_pi(h: &Graph, chi: usize) -> Result<BigRational> {
    let v = h.n();
    let r = chi - 1;
    let aut = count_embeddings(h, h)?;
    let points: Vec<(i64, BigInt)> = (v..=2 * v - 1)
        .map(|m| {
            let copies = embeddings_to_copies(embeddings_into_turan(h, r, m, true), aut)?;
            Ok((m as i64, copies))
        })
        .collect::<Result<_>>()?;
    let coeffs = interpolate_polynomial(&points);
    if !coeffs[v - 1].is_zero() {
        return Err(Error::contract(
            "copy-count polynomial has unexpected degree",
        ));
    }
    for (x, y) in &points {
        if evaluate_polynomial(&coeffs, *x) != BigRational::from(y.clone()) {
            return Err(Error::contract("interpolation failed to fit a sample"));
        }
    }
    let pi = coeffs[v - 2].clone();
    if !pi.is_positive() {
        return Err(Error::contract("leading copy coefficient not positive"));
    }
    Ok(pi)
}

/// Exact leading coefficient of the copy-count polynomial, defined for
/// nonbipartite edge-critical patterns.
pub fn pi_constant(h: &Pattern) -> Result<BigRational> {
    match &h.pi {
        Some(pi) => Ok(pi.clone()),
        None => Err(Error::unsupported_pattern(
            "pi is defined only for nonbipartite edge-critical patterns",
        )),
    }
}

fn solve_theta(h: &Graph, chi: usize, m2: Rational, pi: &BigRational) -> Result<f64> {
    let v = h.n() as i32;
    let e = h.m();
    // theta^(e-1) = (2 - 1/m2) * (chi-1)^(v-2) / pi, exactly.
    let two_minus = BigRational::from(BigInt::from(2))
        - BigRational::new(BigInt::from(*m2.denom()), BigInt::from(*m2.numer()));
    let scale = BigRational::from(BigInt::from(chi as i64 - 1)).pow(v - 2);
    let rhs = two_minus.clone() * scale / pi;
    let rhs_f = rhs
        .to_f64()
        .ok_or_else(|| Error::contract("theta base not representable"))?;
    let theta = rhs_f.powf(1.0 / (e as f64 - 1.0));
    // Residual of the defining equation in its original form.
    let lhs = (chi as f64 - 1.0).powi(2 - v)
        * pi.to_f64()
            .ok_or_else(|| Error::contract("pi not representable"))?
        * theta.powi(e as i32 - 1);
    let target = two_minus
        .to_f64()
        .ok_or_else(|| Error::contract("residual target not representable"))?;
    let residual = (lhs - target).abs();
    // Negated form so that a NaN residual also fails the check.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(residual <= 1e-10) {
        return Err(Error::contract(format!(
            "theta residual too large: {residual}"
        )));
    }
    Ok(theta)
}

/// The threshold constant `theta(H)`, defined for strictly 2-balanced
/// nonbipartite edge-critical patterns.
pub fn theta_constant(h: &Pattern) -> Result<f64> {
    match h.theta {
        Some(t) => Ok(t),
        None => Err(Error::unsupported_pattern(
            "theta needs a strictly 2-balanced, nonbipartite, edge-critical pattern",
        )),
    }
}

/// The margin `n^(v'-2) p^(e'-1) - eps^(e'-1)` for a subpattern `H'` of
/// `H`, nonnegative whenever `p >= eps * n^(-1/m2(H))`.  Rejects `H'` that
/// do not embed into the pattern or have no edges.
pub fn balance_condition_margin(
    h: &Pattern,
    h_sub: &Graph,
    n: usize,
    p: f64,
    eps: f64,
) -> Result<f64> {
    if h_sub.m() == 0 {
        return Err(Error::parameter("H' must have at least one edge"));
    }
    if h_sub.n() > h.v() || count_embeddings(h_sub, h.graph())? == 0 {
        return Err(Error::parameter(
            "H' must embed into the pattern as a subgraph",
        ));
    }
    let vp = h_sub.n() as i32;
    let ep = h_sub.m() as i32;
    Ok((n as f64).powi(vp - 2) * p.powi(ep - 1) - eps.powi(ep - 1))
}
