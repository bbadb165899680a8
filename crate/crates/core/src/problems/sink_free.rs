//! Sink-free orientations: one Boolean per edge, one clause per vertex.

use std::sync::Arc;

use super::{DecodedObject, Encoded, Graph, ProblemError, SamplerKind};
use crate::instance::{Assignment, Clause, ClauseKey, DomainDist, Instance};

/// Orientation of edge `e` as a signed 1-based number from its variable.
pub(crate) fn signed_orientation(a: &Assignment) -> Vec<i64> {
    a.as_slice()
        .iter()
        .enumerate()
        .map(|(e, &x)| if x == 1 { e as i64 + 1 } else { -(e as i64 + 1) })
        .collect()
}

/// Heads and tails of every edge under a signed orientation.
pub(crate) fn oriented_arcs(g: &Graph, signed: &[i64]) -> Vec<(usize, usize)> {
    g.edges()
        .iter()
        .zip(signed)
        .map(|(&(u, v), &s)| if s > 0 { (u, v) } else { (v, u) })
        .collect()
}

/// Whether every vertex has an outgoing edge under the signed orientation.
pub fn is_sink_free(g: &Graph, signed: &[i64]) -> bool {
    if signed.len() != g.edges().len() {
        return false;
    }
    let mut has_out = vec![false; g.n()];
    for (tail, _) in oriented_arcs(g, signed) {
        has_out[tail] = true;
    }
    has_out.iter().all(|&h| h)
}

fn build(g: &Graph) -> Result<Encoded, ProblemError> {
    if g.is_directed() {
        return Err(ProblemError::WrongKind("undirected"));
    }
    let domains = vec![DomainDist::fair_coin(); g.edges().len()];
    let clauses = (0..g.n())
        .map(|v| {
            let literals: Vec<(usize, usize)> = g
                .incident_edges(v)
                .into_iter()
                .map(|e| (e, usize::from(g.edges()[e].0 == v)))
                .collect();
            Clause::cnf(ClauseKey::Index(v), &literals, &domains)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Encoded {
        name: "sink-free",
        instance: Instance::explicit(domains, clauses)?,
        decoder: Arc::new(|a| DecodedObject::Orientation(signed_orientation(a))),
        sampler: SamplerKind::Extremal,
    })
}

/// Encodes sink-free orientations of `g`, whose listed edge directions must
/// themselves form a sink-free orientation.
///
/// Variable `e` is 1 when edge `e` keeps its listed direction; clause `v`
/// says vertex `v` is not a sink.
pub fn encode_sink_free(g: &Graph) -> Result<Encoded, ProblemError> {
    let encoded = build(g)?;
    let reference = Assignment::new(vec![1; g.edges().len()]);
    if let Some(c) = encoded.instance.violated_clauses(&reference).first() {
        return Err(ProblemError::ReferenceHasSink(c.key().index().expect("vertex clauses are indexed")));
    }
    Ok(encoded)
}

/// Same encoding without checking the reference orientation, so instances
/// without any sink-free orientation can be built (and fail to sample).
pub fn encode_sink_free_unchecked(g: &Graph) -> Result<Encoded, ProblemError> {
    build(g)
}

/// Reorients the edges of `g` (keeping their order) so that the listed
/// directions are sink-free, or returns `None` if some component is a tree.
pub fn find_sink_free_orientation(g: &Graph) -> Option<Graph> {
    let n = g.n();
    let m = g.edges().len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    let other = |e: usize, v: usize| {
        let (a, b) = g.edges()[e];
        if a == v {
            b
        } else {
            a
        }
    };
    let mut oriented: Vec<Option<(usize, usize)>> = vec![None; m];
    let mut removed = vec![false; n];
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    if degree.contains(&0) {
        return None;
    }
    // Peel leaves, pointing each one at its last neighbour.
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = leaves.pop() {
        if removed[v] {
            continue;
        }
        let e = *incident[v].iter().find(|&&e| oriented[e].is_none())?;
        let w = other(e, v);
        oriented[e] = Some((v, w));
        removed[v] = true;
        degree[w] -= 1;
        match degree[w] {
            0 => return None,
            1 => leaves.push(w),
            _ => {}
        }
    }
    // Every remaining vertex has degree at least two: orient a DFS forest
    // downwards and every back edge upwards.
    let mut visited = vec![false; n];
    for root in 0..n {
        if removed[root] || visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == incident[v].len() {
                stack.pop();
                continue;
            }
            let e = incident[v][*next];
            *next += 1;
            let w = other(e, v);
            if removed[w] || oriented[e].is_some() {
                continue;
            }
            if visited[w] {
                // Back edge from the deeper vertex v to its ancestor w.
                oriented[e] = Some((v, w));
            } else {
                oriented[e] = Some((v, w));
                visited[w] = true;
                stack.push((w, 0));
            }
        }
    }
    let edges: Vec<(usize, usize)> = oriented.into_iter().collect::<Option<_>>()?;
    let out = Graph::undirected(n, edges).ok()?;
    is_sink_free(&out, &vec![1; m]).then_some(out)
}
