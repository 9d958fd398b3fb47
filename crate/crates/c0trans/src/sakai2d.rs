//! The two-dimensional specialization: disk-side transversality for plane
//! curves, the squeeze-out refuter, and the flat oscillation example curve.
//!
//! Curves are polylines with exact rational vertices. The disk of radius
//! `a` around the meeting point is Euclidean (the single Euclidean
//! exception in this crate; everything else is Chebyshev). The component
//! of a curve through the center is clipped exactly at the circle:
//! crossing parameters are algebraic, so they are handled as sign-definite
//! rational enclosures that are refined until every downstream decision
//! (side classification, probe placement) is resolved exactly. No decision
//! ever depends on an unresolved enclosure.
//!
//! Side convention: `Plus` is the local left of the clipped arc's
//! traversal direction at the anchor edge.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::geom::Point;
use crate::scalar::{rat_display, rat_from_f64, rat_to_f64, Rational};

/// An open polygonal arc in the plane with exact rational vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    /// Consecutive vertices must be distinct and all points planar.
    pub fn new(vertices: Vec<Point>) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty polyline".into()));
        }
        for p in &vertices {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: p.dim(),
                });
            }
        }
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(
                    "consecutive polyline vertices must be distinct".into(),
                ));
            }
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[i + 1])
    }

    fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Exact location of a point on the polyline: a vertex index or an
    /// edge index with an interior parameter.
    fn locate(&self, p: &Point) -> Option<PathLocation> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v == p {
                return Some(PathLocation::Vertex(i));
            }
        }
        for i in 0..self.edge_count() {
            let (a, b) = self.edge(i);
            if let Some(t) = interior_param_on_segment(p, a, b) {
                return Some(PathLocation::Edge(i, t));
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum PathLocation {
    Vertex(usize),
    Edge(usize, Rational),
}

// ---------------------------------------------------------------------------
// Exact planar primitives
// ---------------------------------------------------------------------------

/// Sign of the cross product (b - a) x (c - a): +1 left turn, -1 right
/// turn, 0 collinear.
fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    let v = (b.get(0) - a.get(0)) * (c.get(1) - a.get(1))
        - (b.get(1) - a.get(1)) * (c.get(0) - a.get(0));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Parameter of `p` on the closed segment `[a, b]` (0 and 1 included), or
/// None if `p` is off the segment.
fn interior_param_on_segment(p: &Point, a: &Point, b: &Point) -> Option<Rational> {
    if orient(a, b, p) != 0 {
        return None;
    }
    let d = b.sub(a);
    let (num, den) = if !d.get(0).is_zero() {
        (p.get(0) - a.get(0), d.get(0).clone())
    } else {
        (p.get(1) - a.get(1), d.get(1).clone())
    };
    let t = num / den;
    if t >= Rational::zero() && t <= Rational::one() {
        Some(t)
    } else {
        None
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SegContact {
    None,
    /// A single point interior to both segments; parameter on the first.
    Proper { t_first: Rational, point: Point },
    /// Touching or collinear contact; the contact parameters on the first
    /// segment (an interval for collinear overlap, degenerate otherwise).
    Touch { t_lo: Rational, t_hi: Rational },
}

/// Exact contact classification of segments `[a1,a2]` and `[b1,b2]`,
/// parameterized along the first.
fn segment_contact(a1: &Point, a2: &Point, b1: &Point, b2: &Point) -> SegContact {
    let o1 = orient(a1, a2, b1);
    let o2 = orient(a1, a2, b2);
    let o3 = orient(b1, b2, a1);
    let o4 = orient(b1, b2, a2);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        // Proper crossing: solve for the parameter on the first segment.
        let d1 = a2.sub(a1);
        let d2 = b2.sub(b1);
        let denom = d1.get(0) * d2.get(1) - d1.get(1) * d2.get(0);
        debug_assert!(!denom.is_zero());
        let rhs = b1.sub(a1);
        let t = (rhs.get(0) * d2.get(1) - rhs.get(1) * d2.get(0)) / denom;
        let point = a1.add(&d1.scale(&t));
        return SegContact::Proper { t_first: t, point };
    }
    if o1 == 0 && o2 == 0 {
        // Collinear segments on one line: overlap interval on the first.
        let t_b1 = line_param(a1, a2, b1);
        let t_b2 = line_param(a1, a2, b2);
        let (lo, hi) = if t_b1 <= t_b2 {
            (t_b1, t_b2)
        } else {
            (t_b2, t_b1)
        };
        let tl = lo.max(Rational::zero());
        let th = hi.min(Rational::one());
        if tl > th {
            return SegContact::None;
        }
        return SegContact::Touch { t_lo: tl, t_hi: th };
    }
    // Non-collinear touching contact (an endpoint on the other segment),
    // or no contact at all.
    for p in [b1, b2] {
        if let Some(t) = interior_param_on_segment(p, a1, a2) {
            return SegContact::Touch {
                t_lo: t.clone(),
                t_hi: t,
            };
        }
    }
    for (p, t) in [(a1, Rational::zero()), (a2, Rational::one())] {
        if interior_param_on_segment(p, b1, b2).is_some() {
            return SegContact::Touch {
                t_lo: t.clone(),
                t_hi: t,
            };
        }
    }
    SegContact::None
}

/// Parameter of a point on the LINE through `a, b` (the point must be on
/// the line; the parameter may leave [0,1]).
fn line_param(a: &Point, b: &Point, p: &Point) -> Rational {
    let d = b.sub(a);
    if !d.get(0).is_zero() {
        (p.get(0) - a.get(0)) / d.get(0)
    } else {
        (p.get(1) - a.get(1)) / d.get(1)
    }
}

// ---------------------------------------------------------------------------
// Euclidean disk and circle windows
// ---------------------------------------------------------------------------

/// The open Euclidean disk of radius `radius` around `center`.
#[derive(Debug, Clone)]
struct Disk {
    center: Point,
    radius: Rational,
}

impl Disk {
    fn radius_sq(&self) -> Rational {
        &self.radius * &self.radius
    }

    fn dist_sq(&self, p: &Point) -> Rational {
        let d = p.sub(&self.center);
        d.get(0) * d.get(0) + d.get(1) * d.get(1)
    }

    fn contains_open(&self, p: &Point) -> bool {
        self.dist_sq(p) < self.radius_sq()
    }
}

/// A bound of a parameter window: exact, or a sign-definite bracket of a
/// quadratic root, refinable by bisection.
#[derive(Debug, Clone)]
enum Bound {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl Bound {
    fn upper(&self) -> Rational {
        match self {
            Bound::Exact(t) => t.clone(),
            Bound::Bracket { hi, .. } => hi.clone(),
        }
    }

    fn lower(&self) -> Rational {
        match self {
            Bound::Exact(t) => t.clone(),
            Bound::Bracket { lo, .. } => lo.clone(),
        }
    }
}

/// Quadratic `q(t) = A t^2 + B t + C` with exact coefficients; `q(t) < 0`
/// exactly on the inside-the-disk part of a parameterized segment.
#[derive(Debug, Clone)]
struct EdgeQuadratic {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl EdgeQuadratic {
    fn new(disk: &Disk, from: &Point, to: &Point) -> Self {
        let d = to.sub(from);
        let u = from.sub(&disk.center);
        EdgeQuadratic {
            a: d.get(0) * d.get(0) + d.get(1) * d.get(1),
            b: Rational::from_integer(2.into()) * (u.get(0) * d.get(0) + u.get(1) * d.get(1)),
            c: u.get(0) * u.get(0) + u.get(1) * u.get(1) - disk.radius_sq(),
        }
    }

    fn eval(&self, t: &Rational) -> Rational {
        (&self.a * t + &self.b) * t + &self.c
    }

    /// Bisects a bracket whose ends have opposite strict signs (one side
    /// negative) down to the requested width; an exact rational root
    /// collapses the bracket. The `lo` argument must be the negative side.
    fn refine(&self, mut lo: Rational, mut hi: Rational, width: &Rational) -> Bound {
        debug_assert!(self.eval(&lo).is_negative());
        loop {
            let gap = (&hi - &lo).abs();
            if gap <= *width {
                let (l, h) = if lo <= hi { (lo, hi) } else { (hi, lo) };
                return Bound::Bracket { lo: l, hi: h };
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            let v = self.eval(&mid);
            if v.is_zero() {
                return Bound::Exact(mid);
            }
            if v.is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
}

/// Initial bracket width for circle-crossing enclosures; refined further
/// on demand.
fn initial_width() -> Rational {
    Rational::new(1.into(), 1024.into())
}

/// The parameter window of an edge inside the open disk.
#[derive(Debug, Clone)]
enum Window {
    Empty,
    /// Nonempty open window (lo, hi) within [0, 1].
    Inside { lo: Bound, hi: Bound },
}

fn edge_window(disk: &Disk, from: &Point, to: &Point) -> (EdgeQuadratic, Window) {
    let q = EdgeQuadratic::new(disk, from, to);
    let zero = Rational::zero();
    let one = Rational::one();
    let q0 = q.eval(&zero);
    let q1 = q.eval(&one);
    let width = initial_width();

    let window = if q0.is_negative() && q1.is_negative() {
        Window::Inside {
            lo: Bound::Exact(zero),
            hi: Bound::Exact(one),
        }
    } else if q0.is_negative() {
        // Exits across the circle once.
        let hi = if q1.is_zero() {
            Bound::Exact(one)
        } else {
            q.refine(zero.clone(), one, &width)
        };
        Window::Inside {
            lo: Bound::Exact(zero),
            hi,
        }
    } else if q1.is_negative() {
        let lo = if q0.is_zero() {
            Bound::Exact(zero)
        } else {
            q.refine(one.clone(), zero, &width)
        };
        Window::Inside {
            lo,
            hi: Bound::Exact(one),
        }
    } else {
        // Both endpoints on or outside: possibly a middle lobe.
        let two_a = Rational::from_integer(2.into()) * &q.a;
        if two_a.is_zero() {
            return (q, Window::Empty);
        }
        let t_v = -&q.b / &two_a;
        if t_v <= zero || t_v >= one || !q.eval(&t_v).is_negative() {
            return (q, Window::Empty);
        }
        let lo = if q0.is_zero() {
            Bound::Exact(zero.clone())
        } else {
            q.refine(t_v.clone(), zero, &width)
        };
        let hi = if q1.is_zero() {
            Bound::Exact(one)
        } else {
            q.refine(t_v, one, &width)
        };
        Window::Inside { lo, hi }
    };
    (q, window)
}

// ---------------------------------------------------------------------------
// Disk components
// ---------------------------------------------------------------------------

/// How one end of a disk component terminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndKind {
    /// The curve ends at a vertex inside the open disk: the component does
    /// not reach the boundary circle on this side.
    Terminates,
    /// The component leaves the open disk across its final chain edge.
    Exits,
}

/// The component of a curve inside an open disk, through a marked point.
///
/// `chain` is a sub-polyline of the curve: all component vertices strictly
/// inside the disk, plus — for each exiting end — the first vertex at or
/// beyond the circle, so every edge of the true clipped component is
/// contained in a chain edge with rational endpoints. The exact clipped
/// arc is `chain` intersected with the open disk.
#[derive(Debug, Clone)]
pub struct DiskComponent {
    center: Point,
    radius: Rational,
    chain: Vec<Point>,
    start: EndKind,
    end: EndKind,
    /// The marked point the component runs through.
    pub anchor: Point,
    /// Index into `chain` of the vertex at or immediately before the
    /// anchor.
    anchor_index: usize,
}

impl DiskComponent {
    /// The component spans the disk: both ends reach the boundary circle.
    pub fn spans(&self) -> bool {
        self.start == EndKind::Exits && self.end == EndKind::Exits
    }

    pub fn chain(&self) -> &[Point] {
        &self.chain
    }

    pub fn start_kind(&self) -> &EndKind {
        &self.start
    }

    pub fn end_kind(&self) -> &EndKind {
        &self.end
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// Vertices of the chain strictly inside the open disk.
    pub fn inner_vertices(&self) -> Vec<Point> {
        let disk = self.disk();
        self.chain
            .iter()
            .filter(|p| disk.contains_open(p))
            .cloned()
            .collect()
    }

    fn disk(&self) -> Disk {
        Disk {
            center: self.center.clone(),
            radius: self.radius.clone(),
        }
    }

    fn edges(&self) -> Vec<(Point, Point)> {
        self.chain
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect()
    }
}

/// Extracts the maximal connected sub-arc of `curve` through `p` inside
/// the open Euclidean disk of radius `a` centered at `p`.
pub fn component_in_disk(
    curve: &Polyline,
    p: &Point,
    a: &Rational,
) -> Result<DiskComponent, Error> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: p.dim(),
        });
    }
    if !a.is_positive() {
        return Err(Error::InvalidInput("disk radius must be positive".into()));
    }
    let location = curve
        .locate(p)
        .ok_or_else(|| Error::Precondition("the marked point does not lie on the curve".into()))?;
    let disk = Disk {
        center: p.clone(),
        radius: a.clone(),
    };

    // Walk backward and forward from the location while inside the open
    // disk. The walk collects whole vertices; an edge leaving the disk
    // contributes its first outside-or-on vertex as the chain end. A
    // segment meets the disk in one sub-segment, so once a vertex is
    // outside the walk on that side is over.
    let (back_start, fwd_start) = match &location {
        PathLocation::Vertex(i) => {
            if *i == 0 {
                (None, Some(0))
            } else {
                (Some(*i - 1), Some(*i))
            }
        }
        PathLocation::Edge(i, _) => (Some(*i), Some(*i + 1)),
    };

    let mut before: Vec<Point> = Vec::new();
    let mut start = EndKind::Terminates;
    if let Some(mut idx) = back_start {
        loop {
            let v = &curve.vertices()[idx];
            before.push(v.clone());
            if !disk.contains_open(v) {
                start = EndKind::Exits;
                break;
            }
            if idx == 0 {
                break;
            }
            idx -= 1;
        }
    }
    before.reverse();

    let mut after: Vec<Point> = Vec::new();
    let mut end = EndKind::Terminates;
    if let Some(start_idx) = fwd_start {
        let mut idx = start_idx;
        while idx < curve.len() {
            let v = &curve.vertices()[idx];
            after.push(v.clone());
            if !disk.contains_open(v) {
                end = EndKind::Exits;
                break;
            }
            idx += 1;
        }
    }

    let anchor_index = before.len().saturating_sub(1);
    let mut chain = before;
    chain.extend(after);
    chain.dedup();
    Ok(DiskComponent {
        center: p.clone(),
        radius: a.clone(),
        chain,
        start,
        end,
        anchor: p.clone(),
        anchor_index,
    })
}

// ---------------------------------------------------------------------------
// Side classification
// ---------------------------------------------------------------------------

/// Which side of the separating arc a disk point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
    On,
}

/// Classifies points of the open disk against a spanning arc by exact
/// crossing parity toward a verified anchor off the arc.
#[derive(Debug, Clone)]
pub struct SideClassifier {
    disk: Disk,
    edges: Vec<(Point, Point)>,
    /// Anchor candidates on the plus side, all in one connected sliver off
    /// the anchor edge; parity against any general-position one defines
    /// the class.
    plus_anchors: Vec<Point>,
    minus_anchor: Point,
}

fn rot_left(v: &Point) -> Point {
    Point::new(vec![-v.get(1).clone(), v.get(0).clone()])
}

fn cheb_unit(v: &Point) -> Point {
    let norm = v.cheb_norm();
    debug_assert!(!norm.is_zero());
    v.scale(&(Rational::one() / norm))
}

impl SideClassifier {
    /// Builds the classifier for a spanning component: picks a foot point
    /// in the relative interior of the arc near the marked point and
    /// verified anchor points on both sides. `Plus` is the left of the
    /// anchor edge's direction.
    pub fn new(component: &DiskComponent) -> Result<Self, Error> {
        if !component.spans() {
            return Err(Error::Precondition(
                "side classification needs an arc spanning the disk".into(),
            ));
        }
        let disk = component.disk();
        let edges = component.edges();

        // The anchor edge: the chain edge at the marked point.
        let ai = component.anchor_index.min(edges.len() - 1);
        let (ea, eb) = (&edges[ai].0, &edges[ai].1);
        let dir = eb.sub(ea);
        let normal = cheb_unit(&rot_left(&dir));

        // A foot strictly inside the disk on the open anchor edge: walk
        // from the edge start toward the other end, halving the step.
        let mut foot = None;
        let mut step = Rational::new(1.into(), 2.into());
        for _ in 0..64 {
            let candidate = ea.add(&eb.sub(ea).scale(&step));
            if disk.contains_open(&candidate) {
                foot = Some(candidate);
                break;
            }
            step /= Rational::from_integer(2.into());
        }
        let foot = foot.ok_or_else(|| {
            Error::Internal("no disk-interior foot found on the anchor edge".into())
        })?;

        // Clearance: squared distance from the foot to every other edge.
        let mut clearance_sq: Option<Rational> = None;
        for (i, (u, w)) in edges.iter().enumerate() {
            if i == ai {
                continue;
            }
            let d = segment_point_dist_sq(u, w, &foot);
            if clearance_sq.as_ref().map(|c| &d < c).unwrap_or(true) {
                clearance_sq = Some(d);
            }
        }

        // Anchor offset: small enough to stay inside the disk and below
        // the clearance on both sides.
        let mut t = Rational::new(1.into(), 8.into()) * &disk.radius;
        let norm_sq = normal.get(0) * normal.get(0) + normal.get(1) * normal.get(1);
        for _ in 0..200 {
            let fits_clearance = clearance_sq
                .as_ref()
                .map(|c| &(&t * &t) * &norm_sq < *c)
                .unwrap_or(true);
            let plus = foot.add(&normal.scale(&t));
            let minus = foot.sub(&normal.scale(&t));
            if fits_clearance && disk.contains_open(&plus) && disk.contains_open(&minus) {
                break;
            }
            t /= Rational::from_integer(2.into());
        }
        let mut plus_anchors = Vec::new();
        let mut tt = t.clone();
        for _ in 0..24 {
            plus_anchors.push(foot.add(&normal.scale(&tt)));
            tt /= Rational::from_integer(3.into());
        }
        let minus_anchor = foot.sub(&normal.scale(&t));

        Ok(SideClassifier {
            disk,
            edges,
            plus_anchors,
            minus_anchor,
        })
    }

    /// Exact classification of a point of the open disk.
    pub fn classify(&self, q: &Point) -> Result<Side, Error> {
        if !self.disk.contains_open(q) {
            return Err(Error::Precondition(
                "can only classify points strictly inside the disk".into(),
            ));
        }
        for (u, w) in &self.edges {
            if interior_param_on_segment(q, u, w).is_some() {
                return Ok(Side::On);
            }
        }
        for anchor in &self.plus_anchors {
            if let Some(parity) = crossing_parity(q, anchor, &self.edges) {
                return Ok(if parity { Side::Minus } else { Side::Plus });
            }
        }
        Err(Error::Internal(
            "no general-position anchor for side classification".into(),
        ))
    }

    /// A verified point on the plus side (for rendering and tests).
    pub fn plus_witness(&self) -> &Point {
        &self.plus_anchors[0]
    }

    /// A verified point on the minus side.
    pub fn minus_witness(&self) -> &Point {
        &self.minus_anchor
    }
}

/// Squared Euclidean distance from a point to a closed segment, exact.
fn segment_point_dist_sq(u: &Point, w: &Point, q: &Point) -> Rational {
    let d = w.sub(u);
    let len_sq = d.get(0) * d.get(0) + d.get(1) * d.get(1);
    let qu = q.sub(u);
    let proj = qu.get(0) * d.get(0) + qu.get(1) * d.get(1);
    let t = if len_sq.is_zero() {
        Rational::zero()
    } else {
        (proj / &len_sq).max(Rational::zero()).min(Rational::one())
    };
    let closest = u.add(&d.scale(&t));
    let e = q.sub(&closest);
    e.get(0) * e.get(0) + e.get(1) * e.get(1)
}

/// Crossing parity of the segment (q, anchor) against the edges, or None
/// when the segment is not in general position (touches a vertex,
/// overlaps an edge, or grazes an endpoint).
fn crossing_parity(q: &Point, anchor: &Point, edges: &[(Point, Point)]) -> Option<bool> {
    let mut parity = false;
    for (u, w) in edges {
        match segment_contact(q, anchor, u, w) {
            SegContact::None => {}
            SegContact::Proper { .. } => parity = !parity,
            SegContact::Touch { .. } => return None,
        }
    }
    Some(parity)
}

// ---------------------------------------------------------------------------
// Side probes along a component
// ---------------------------------------------------------------------------

/// Sides met by a component, with crossing witnesses.
#[derive(Debug, Clone)]
struct SideSurvey {
    meets_plus: bool,
    meets_minus: bool,
    /// Points where the probed arc properly crosses the separating arc
    /// strictly inside the disk.
    crossings: Vec<Point>,
}

/// Exact side survey of component `l` against the classifier of the
/// separating component `k`: classifies every inner vertex and a probe
/// point inside every contact-free span of every edge window.
fn survey_sides(
    classifier: &SideClassifier,
    k: &DiskComponent,
    l: &DiskComponent,
) -> Result<SideSurvey, Error> {
    let disk = k.disk();
    let mut meets_plus = false;
    let mut meets_minus = false;
    let mut crossings: Vec<Point> = Vec::new();

    for v in l.inner_vertices() {
        match classifier.classify(&v)? {
            Side::Plus => meets_plus = true,
            Side::Minus => meets_minus = true,
            Side::On => {}
        }
    }

    let k_edges = k.edges();
    for (u, w) in l.edges() {
        let (quad, window) = edge_window(&disk, &u, &w);
        let Window::Inside { lo, hi } = window else {
            continue;
        };
        // Rational contact parameters with the separating chain; in-window
        // membership is decided later by exact in-disk tests of the probe
        // points themselves.
        let mut events: Vec<Rational> = Vec::new();
        for (ku, kw) in &k_edges {
            match segment_contact(&u, &w, ku, kw) {
                SegContact::None => {}
                SegContact::Proper { t_first, point } => {
                    if disk.contains_open(&point) {
                        crossings.push(point.clone());
                    }
                    events.push(t_first);
                }
                SegContact::Touch { t_lo, t_hi } => {
                    events.push(t_lo);
                    events.push(t_hi);
                }
            }
        }
        events.sort();
        events.dedup();

        // Separate the window-end enclosures, then probe the midpoint of
        // every event gap.
        let mut lo_b = lo;
        let mut hi_b = hi;
        for _ in 0..64 {
            if lo_b.upper() < hi_b.lower() {
                break;
            }
            if let Bound::Bracket { lo: bl, hi: bh } = &lo_b {
                let width = ((bh - bl) / Rational::from_integer(4.into())).abs();
                lo_b = quad.refine(bh.clone(), bl.clone(), &width);
            }
            if let Bound::Bracket { lo: bl, hi: bh } = &hi_b {
                let width = ((bh - bl) / Rational::from_integer(4.into())).abs();
                hi_b = quad.refine(bl.clone(), bh.clone(), &width);
            }
            if matches!((&lo_b, &hi_b), (Bound::Exact(_), Bound::Exact(_))) {
                break;
            }
        }
        let lo_guard = lo_b.upper();
        let hi_guard = hi_b.lower();
        if lo_guard >= hi_guard {
            // Window too thin to resolve: the edge hugs the circle and
            // contributes no strict side information.
            continue;
        }
        let mut cuts: Vec<Rational> = vec![lo_guard.clone()];
        for e in &events {
            if *e > lo_guard && *e < hi_guard {
                cuts.push(e.clone());
            }
        }
        cuts.push(hi_guard.clone());
        for pair in cuts.windows(2) {
            if pair[0] >= pair[1] {
                continue;
            }
            let mid = (&pair[0] + &pair[1]) / Rational::from_integer(2.into());
            let probe = u.add(&w.sub(&u).scale(&mid));
            if disk.contains_open(&probe) {
                match classifier.classify(&probe)? {
                    Side::Plus => meets_plus = true,
                    Side::Minus => meets_minus = true,
                    Side::On => {}
                }
            }
        }
    }

    Ok(SideSurvey {
        meets_plus,
        meets_minus,
        crossings,
    })
}

// ---------------------------------------------------------------------------
// The per-radius transversality check
// ---------------------------------------------------------------------------

/// Verdict for a single disk radius.
#[derive(Debug, Clone)]
pub struct RadiusVerdict {
    pub radius: Rational,
    /// The separating component spans the disk; the verdict is only
    /// meaningful when true.
    pub k_spans: bool,
    pub meets_plus: bool,
    pub meets_minus: bool,
    /// `meets_plus && meets_minus`.
    pub transverse: bool,
    /// Chebyshev distance from the marked point to the nearest resolved
    /// strict crossing of the two arcs, when one exists.
    pub smallest_flip_distance: Option<Rational>,
    /// Present when the radius could not be judged (e.g. non-spanning
    /// separating component).
    pub note: Option<String>,
}

/// Report of [`sakai_check`] over a radius schedule.
#[derive(Debug, Clone)]
pub struct SakaiReport {
    pub verdicts: Vec<RadiusVerdict>,
}

impl SakaiReport {
    /// True when every radius was judged and found transverse.
    pub fn all_transverse(&self) -> bool {
        !self.verdicts.is_empty()
            && self
                .verdicts
                .iter()
                .all(|v| v.k_spans && v.transverse && v.note.is_none())
    }
}

/// The disk-side transversality test for curve pairs: per radius, the
/// component of `l` through `p` must meet both open sides of the disk cut
/// by the component of `k` through `p`.
pub fn sakai_check(
    k: &Polyline,
    l: &Polyline,
    p: &Point,
    radii: &[Rational],
) -> Result<SakaiReport, Error> {
    if radii.is_empty() {
        return Err(Error::InvalidInput("empty radius schedule".into()));
    }
    let mut verdicts = Vec::with_capacity(radii.len());
    for a in radii {
        let k_comp = component_in_disk(k, p, a)?;
        if !k_comp.spans() {
            verdicts.push(RadiusVerdict {
                radius: a.clone(),
                k_spans: false,
                meets_plus: false,
                meets_minus: false,
                transverse: false,
                smallest_flip_distance: None,
                note: Some(format!(
                    "separating component does not span the disk of radius {}",
                    rat_display(a)
                )),
            });
            continue;
        }
        let l_comp = component_in_disk(l, p, a)?;
        let classifier = SideClassifier::new(&k_comp)?;
        let survey = survey_sides(&classifier, &k_comp, &l_comp)?;
        let smallest_flip_distance = survey
            .crossings
            .iter()
            .map(|point| point.sub(p).cheb_norm())
            .min();
        verdicts.push(RadiusVerdict {
            radius: a.clone(),
            k_spans: true,
            meets_plus: survey.meets_plus,
            meets_minus: survey.meets_minus,
            transverse: survey.meets_plus && survey.meets_minus,
            smallest_flip_distance,
            note: None,
        });
    }
    Ok(SakaiReport { verdicts })
}

// ---------------------------------------------------------------------------
// Squeeze-out
// ---------------------------------------------------------------------------

/// A verified squeeze-out witness: a near-identity pushed copy of the
/// one-sided component, exactly disjoint from the separating arc.
#[derive(Debug, Clone)]
pub struct SqueezeWitness {
    /// The pushed polyline (rational vertices).
    pub pushed: Polyline,
    /// Upper bound on the uniform distance from the original component
    /// (push magnitude plus end-snapping slack), strictly below the
    /// requested epsilon.
    pub c0_bound: Rational,
    /// The side the component was pushed into.
    pub side: Side,
}

/// Which window bound to snap toward.
#[derive(Clone, Copy, PartialEq, Eq)]
enum WindowEnd {
    Lo,
    Hi,
}

/// A rational point of the edge strictly inside the disk, within `slack`
/// (Chebyshev) of the true circle crossing at the chosen window end.
/// Returns the point and an exact bound on the omitted tail length.
fn snap_into_window(
    disk: &Disk,
    u: &Point,
    w: &Point,
    end: WindowEnd,
    slack: &Rational,
) -> Result<(Point, Rational), Error> {
    let (quad, window) = edge_window(disk, u, w);
    let Window::Inside { lo, hi } = window else {
        return Err(Error::Internal("snapping on an edge with empty window".into()));
    };
    let edge_norm = w.sub(u).cheb_norm();
    if edge_norm.is_zero() {
        return Err(Error::Internal("degenerate clipped edge".into()));
    }
    let param_slack = slack / &edge_norm / Rational::from_integer(2.into());
    let at = |t: &Rational| u.add(&w.sub(u).scale(t));

    let (bound, other) = match end {
        WindowEnd::Lo => (lo, hi),
        WindowEnd::Hi => (hi, lo),
    };
    match bound {
        Bound::Exact(x) => {
            // The window is open at x; step into it and verify exactly.
            let guard = match end {
                WindowEnd::Lo => (other.lower() - &x).abs(),
                WindowEnd::Hi => (&x - other.upper()).abs(),
            };
            let mut step = param_slack.min(guard / Rational::from_integer(2.into()));
            for _ in 0..200 {
                let t = match end {
                    WindowEnd::Lo => &x + &step,
                    WindowEnd::Hi => &x - &step,
                };
                if quad.eval(&t).is_negative() {
                    return Ok((at(&t), &edge_norm * &step));
                }
                step /= Rational::from_integer(2.into());
            }
            Err(Error::Internal("could not step into the disk window".into()))
        }
        Bound::Bracket { lo: bl, hi: bh } => {
            // Refine so the bracket width bounds the omitted tail; the
            // negative (inside) side of the lo bound is above the root,
            // of the hi bound below it.
            let refined = match end {
                WindowEnd::Lo => quad.refine(bh, bl, &param_slack),
                WindowEnd::Hi => quad.refine(bl, bh, &param_slack),
            };
            match refined {
                Bound::Exact(x) => {
                    // Landed exactly on the root: recurse into the exact
                    // handling by stepping inward.
                    let step = &param_slack / Rational::from_integer(2.into());
                    let mut s = step;
                    for _ in 0..200 {
                        let t = match end {
                            WindowEnd::Lo => &x + &s,
                            WindowEnd::Hi => &x - &s,
                        };
                        if quad.eval(&t).is_negative() {
                            return Ok((at(&t), &edge_norm * &s));
                        }
                        s /= Rational::from_integer(2.into());
                    }
                    Err(Error::Internal("could not step off an exact root".into()))
                }
                Bound::Bracket { lo: l, hi: h } => {
                    let t = match end {
                        WindowEnd::Lo => h.clone(),
                        WindowEnd::Hi => l.clone(),
                    };
                    debug_assert!(quad.eval(&t).is_negative());
                    Ok((at(&t), &edge_norm * (h - l)))
                }
            }
        }
    }
}

/// Pushes a one-sided component off the separating arc: a vertex-wise
/// perturbation of uniform norm below `epsilon` whose image is exactly
/// disjoint from the separating arc inside the disk. The returned witness
/// is re-verified before return.
pub fn squeeze_out(
    k_comp: &DiskComponent,
    l_comp: &DiskComponent,
    epsilon: &Rational,
) -> Result<SqueezeWitness, Error> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let classifier = SideClassifier::new(k_comp)?;
    let survey = survey_sides(&classifier, k_comp, l_comp)?;
    if survey.meets_plus && survey.meets_minus {
        return Err(Error::Precondition(
            "component is strictly two-sided; squeeze-out impossible".into(),
        ));
    }
    let side = if survey.meets_minus {
        Side::Minus
    } else {
        Side::Plus
    };

    let disk = k_comp.disk();
    let quarter = epsilon / Rational::from_integer(4.into());

    // Rational base polyline: snap clipped ends into the disk.
    let chain = l_comp.chain();
    let single_chord = chain.len() == 2
        && *l_comp.start_kind() == EndKind::Exits
        && *l_comp.end_kind() == EndKind::Exits;
    let mut base: Vec<Point> = Vec::new();
    let mut snap_slack = Rational::zero();
    if chain.len() == 1 {
        base.push(chain[0].clone());
    } else if single_chord {
        // One edge crossing the whole disk: approximate the chord by the
        // segment between near-boundary samples (the omitted tails are
        // within the snapping slack; the middle is exact).
        let (s_lo, tail_lo) =
            snap_into_window(&disk, &chain[0], &chain[1], WindowEnd::Lo, &quarter)?;
        let (s_hi, tail_hi) =
            snap_into_window(&disk, &chain[0], &chain[1], WindowEnd::Hi, &quarter)?;
        snap_slack = tail_lo.max(tail_hi);
        base.push(s_lo);
        base.push(s_hi);
        base.dedup();
    } else {
        if *l_comp.start_kind() == EndKind::Exits {
            let (snapped, omitted) =
                snap_into_window(&disk, &chain[0], &chain[1], WindowEnd::Lo, &quarter)?;
            snap_slack = snap_slack.max(omitted);
            base.push(snapped);
        } else {
            base.push(chain[0].clone());
        }
        for v in &chain[1..chain.len() - 1] {
            base.push(v.clone());
        }
        if *l_comp.end_kind() == EndKind::Exits {
            let (snapped, omitted) = snap_into_window(
                &disk,
                &chain[chain.len() - 2],
                &chain[chain.len() - 1],
                WindowEnd::Hi,
                &quarter,
            )?;
            snap_slack = snap_slack.max(omitted);
            base.push(snapped);
        } else {
            base.push(chain[chain.len() - 1].clone());
        }
        base.dedup();
    }

    // Insert every proper crossing point with the separating chain as a
    // vertex, so every contact gets its own push.
    let k_edges = k_comp.edges();
    let mut refined: Vec<Point> = Vec::new();
    for i in 0..base.len() {
        refined.push(base[i].clone());
        if i + 1 == base.len() {
            break;
        }
        let (u, w) = (&base[i], &base[i + 1]);
        let mut cuts: Vec<(Rational, Point)> = Vec::new();
        for (ku, kw) in &k_edges {
            if let SegContact::Proper { t_first, point } = segment_contact(u, w, ku, kw) {
                cuts.push((t_first, point));
            }
        }
        cuts.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, point) in cuts {
            if refined.last() != Some(&point) {
                refined.push(point);
            }
        }
    }
    refined.dedup();

    // Early exit: already disjoint from the separating arc.
    if disjoint_from_arc(&refined, &k_edges, &disk)? {
        return Ok(SqueezeWitness {
            pushed: Polyline::new(refined)?,
            c0_bound: snap_slack,
            side,
        });
    }

    // Push magnitude: start at half epsilon (the snap slack has its
    // quarter), halve on verification failure.
    let mut t = epsilon / Rational::from_integer(2.into());
    let budget = crate::linking::default_retry_budget().max(16);
    for _ in 0..budget {
        if let Some(pushed) = try_push(&refined, &k_edges, &disk, &classifier, side, &t)? {
            let c0_bound = &t + &snap_slack;
            if c0_bound >= *epsilon {
                return Err(Error::Internal(
                    "push bound exceeded epsilon although components were sized for it".into(),
                ));
            }
            return Ok(SqueezeWitness {
                pushed: Polyline::new(pushed)?,
                c0_bound,
                side,
            });
        }
        t /= Rational::from_integer(2.into());
    }
    Err(Error::RetryBudget(
        "no verified squeeze-out found within the retry budget; refine the input or increase \
         epsilon"
            .into(),
    ))
}

/// Does the polyline avoid the separating arc (chain edges restricted to
/// the open disk) entirely? Exact.
fn disjoint_from_arc(
    polyline: &[Point],
    k_edges: &[(Point, Point)],
    disk: &Disk,
) -> Result<bool, Error> {
    if polyline.len() == 1 {
        let q = &polyline[0];
        for (ku, kw) in k_edges {
            if interior_param_on_segment(q, ku, kw).is_some() && disk.contains_open(q) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for pair in polyline.windows(2) {
        let (u, w) = (&pair[0], &pair[1]);
        for (ku, kw) in k_edges {
            match segment_contact(u, w, ku, kw) {
                SegContact::None => {}
                SegContact::Proper { point, .. } => {
                    if disk.contains_open(&point) {
                        return Ok(false);
                    }
                }
                SegContact::Touch { t_lo, t_hi } => {
                    // The contact set on the edge is [t_lo, t_hi]; it
                    // meets the open disk iff its distance minimum does.
                    let lo_point = u.add(&w.sub(u).scale(&t_lo));
                    let hi_point = u.add(&w.sub(u).scale(&t_hi));
                    if disk.contains_open(&lo_point) || disk.contains_open(&hi_point) {
                        return Ok(false);
                    }
                    if t_lo != t_hi {
                        let quad = EdgeQuadratic::new(disk, u, w);
                        let two_a = Rational::from_integer(2.into()) * &quad.a;
                        if !two_a.is_zero() {
                            let t_v = -&quad.b / &two_a;
                            if t_v > t_lo && t_v < t_hi {
                                let p = u.add(&w.sub(u).scale(&t_v));
                                if disk.contains_open(&p) {
                                    return Ok(false);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// One push attempt at magnitude `t`: displace every vertex along its
/// pseudo-bisector normal oriented into the target side, then verify exact
/// disjointness. Returns None when verification fails.
fn try_push(
    base: &[Point],
    k_edges: &[(Point, Point)],
    disk: &Disk,
    classifier: &SideClassifier,
    side: Side,
    t: &Rational,
) -> Result<Option<Vec<Point>>, Error> {
    let n = base.len();
    let mut pushed = Vec::with_capacity(n);
    for i in 0..n {
        let prev = if i > 0 { Some(&base[i - 1]) } else { None };
        let next = if i + 1 < n { Some(&base[i + 1]) } else { None };
        let mut normal = Point::origin(2);
        if let Some(p) = prev {
            let e = base[i].sub(p);
            if !e.cheb_norm().is_zero() {
                normal = normal.add(&rot_left(&cheb_unit(&e)));
            }
        }
        if let Some(nx) = next {
            let e = nx.sub(&base[i]);
            if !e.cheb_norm().is_zero() {
                normal = normal.add(&rot_left(&cheb_unit(&e)));
            }
        }
        if normal.cheb_norm().is_zero() {
            // Spike joint: fall back to one adjacent edge's normal.
            let e = match (next, prev) {
                (Some(nx), _) => nx.sub(&base[i]),
                (None, Some(p)) => base[i].sub(p),
                (None, None) => {
                    return Err(Error::Internal("isolated vertex in push".into()));
                }
            };
            normal = rot_left(&cheb_unit(&e));
        }
        let unit = cheb_unit(&normal);

        // Orient into the target side when a probe resolves; otherwise
        // keep the geometric left.
        let candidate = base[i].add(&unit.scale(t));
        let anti = base[i].sub(&unit.scale(t));
        let side_of = |p: &Point| -> Result<Option<Side>, Error> {
            if !disk.contains_open(p) {
                return Ok(None);
            }
            Ok(Some(classifier.classify(p)?))
        };
        let cand_side = side_of(&candidate)?;
        let anti_side = side_of(&anti)?;
        let chosen = match (cand_side, anti_side) {
            (Some(s), _) if s == side => candidate,
            (_, Some(s)) if s == side => anti,
            _ => candidate,
        };
        pushed.push(chosen);
    }
    pushed.dedup();
    if pushed.len() < base.len().min(2) {
        return Ok(None);
    }
    if disjoint_from_arc(&pushed, k_edges, disk)? {
        Ok(Some(pushed))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// The flat oscillation curve
// ---------------------------------------------------------------------------

/// Samples the graph of `y(x) = exp(-1/x^2) sin(1/x)` for `x > 0` and
/// `y = 0` for `x <= 0`, on `[-x_max, x_max]` with the given step. The
/// y-values are evaluated in floating point and embedded as exact
/// rationals; x-grid points are exact.
pub fn oscillation_curve(x_max: &Rational, step: &Rational) -> Result<Polyline, Error> {
    if !step.is_positive() || step >= x_max {
        return Err(Error::InvalidInput(
            "need 0 < step < x_max for the oscillation curve".into(),
        ));
    }
    let two = Rational::from_integer(2.into());
    let count = ((&two * x_max) / step).floor().to_integer();
    let count = num_traits::ToPrimitive::to_usize(&count)
        .ok_or_else(|| Error::InvalidInput("step too small: too many samples".into()))?;
    let mut vertices = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let x = -x_max + Rational::from_integer((i as i64).into()) * step;
        let y = if x.is_positive() {
            let xf = rat_to_f64(&x);
            let val = (-1.0 / (xf * xf)).exp() * (1.0 / xf).sin();
            rat_from_f64(val)?
        } else {
            Rational::zero()
        };
        vertices.push(Point::new(vec![x, y]));
    }
    Polyline::new(vertices)
}
