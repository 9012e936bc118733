use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{AffineEnclosure, IfsParams, ProbVector, Symbol};
use crate::interval::Interval;
use crate::par;

pub const MAX_DEPTH: usize = 20;
/// Upper limit on visited cylinders per call.
pub const MAX_NODES: u64 = 50_000_000;
/// Cylinders are expanded breadth-first to this level before the parallel
/// depth-first pass.
const SPLIT_LEVEL: usize = 3;

/// Bounds `lower <= nu(I) <= upper` from the cylinders of one depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalMass {
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
}

impl IntervalMass {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Copy)]
struct Node {
    enc: AffineEnclosure,
    weight: f64,
    level: usize,
    first: usize,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    inside: [f64; 3],
    straddle: [f64; 3],
    nodes: u64,
}

impl Tally {
    fn absorb(&mut self, o: &Tally) {
        for k in 0..3 {
            self.inside[k] += o.inside[k];
            self.straddle[k] += o.straddle[k];
        }
        self.nodes += o.nodes;
    }
}

enum Visit {
    Done,
    Expand,
}

fn classify(node: &Node, target: &Interval, depth: usize, t: &mut Tally) -> Visit {
    t.nodes += 1;
    let hull = node.enc.hull();
    if hull.is_subset_of(target) {
        t.inside[node.first] += node.weight;
        Visit::Done
    } else if hull.is_disjoint(target) {
        Visit::Done
    } else if node.level == depth {
        t.straddle[node.first] += node.weight;
        Visit::Done
    } else {
        Visit::Expand
    }
}

fn children<'a>(
    node: &'a Node,
    params: &'a IfsParams,
    probs: &'a ProbVector,
) -> impl Iterator<Item = Node> + 'a {
    Symbol::ALL.iter().map(move |&s| Node {
        enc: node.enc.then(params, s),
        weight: node.weight * probs.get(s),
        level: node.level + 1,
        first: if node.level == 0 { s.index() } else { node.first },
    })
}

fn dfs(
    node: &Node,
    params: &IfsParams,
    probs: &ProbVector,
    target: &Interval,
    depth: usize,
    t: &mut Tally,
) -> Result<()> {
    if let Visit::Expand = classify(node, target, depth, t) {
        if t.nodes > MAX_NODES {
            return Err(Error::ResourceLimit {
                what: "interval mass cylinders",
                needed: t.nodes,
                limit: MAX_NODES,
            });
        }
        for c in children(node, params, probs) {
            dfs(&c, params, probs, target, depth, t)?;
        }
    }
    Ok(())
}

/// Per-first-symbol tallies over cylinders of level `depth >= 1`.
fn tally(
    params: &IfsParams,
    probs: &ProbVector,
    target: &Interval,
    depth: usize,
) -> Result<Tally> {
    if depth > MAX_DEPTH {
        return Err(Error::ResourceLimit {
            what: "interval mass depth",
            needed: depth as u64,
            limit: MAX_DEPTH as u64,
        });
    }
    let mut total = Tally::default();
    let mut frontier = vec![Node {
        enc: AffineEnclosure::identity(),
        weight: 1.0,
        level: 0,
        first: 0,
    }];
    // The root is always expanded so every weight is attributed to a first symbol.
    let mut level = 0;
    while level < SPLIT_LEVEL.min(depth) {
        let mut next = Vec::new();
        for node in &frontier {
            let expand = level == 0
                || matches!(classify(node, target, depth, &mut total), Visit::Expand);
            if expand {
                next.extend(children(node, params, probs));
            }
        }
        frontier = next;
        level += 1;
    }
    let parts = par::map_slice(&frontier, |node| {
        let mut t = Tally::default();
        dfs(node, params, probs, target, depth, &mut t).map(|_| t)
    });
    for p in parts {
        total.absorb(&p?);
    }
    if total.nodes > MAX_NODES {
        return Err(Error::ResourceLimit {
            what: "interval mass cylinders",
            needed: total.nodes,
            limit: MAX_NODES,
        });
    }
    Ok(total)
}

/// Certified bounds on `nu(interval)` from the cylinders of length `depth`:
/// cylinders whose hull lies inside count toward both bounds, those whose hull
/// meets the boundary only toward `upper`.
pub fn interval_mass(
    params: &IfsParams,
    probs: &ProbVector,
    interval: &Interval,
    depth: usize,
) -> Result<IntervalMass> {
    if depth == 0 {
        let inside = Interval::UNIT.is_subset_of(interval);
        return Ok(IntervalMass {
            lower: if inside { 1.0 } else { 0.0 },
            upper: if inside || interval.intersects(&Interval::UNIT) { 1.0 } else { 0.0 },
            depth,
        });
    }
    let t = tally(params, probs, interval, depth)?;
    let lower: f64 = t.inside.iter().sum();
    let straddle: f64 = t.straddle.iter().sum();
    Ok(IntervalMass {
        lower,
        upper: lower + straddle,
        depth,
    })
}

/// Bounds on `nu(interval ∩ pi[s])` for `s = 1, 2, 3`.
pub(crate) fn interval_mass_by_first_symbol(
    params: &IfsParams,
    probs: &ProbVector,
    interval: &Interval,
    depth: usize,
) -> Result<[IntervalMass; 3]> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let t = tally(params, probs, interval, depth)?;
    Ok(std::array::from_fn(|k| IntervalMass {
        lower: t.inside[k],
        upper: t.inside[k] + t.straddle[k],
        depth,
    }))
}
