use std::collections::{HashMap, HashSet};

use super::{GradientField, MorseError, MorseFunction};
use crate::complex::{CellComplex, CellId};

/// Number of V-paths from the faces of `sigma` to `tau`, saturating at
/// `u64::MAX`.
pub fn count_paths_between(k: &CellComplex, v: &GradientField, sigma: CellId, tau: CellId) -> u64 {
    let mut memo = HashMap::new();
    k.faces(sigma).iter().fold(0u64, |acc, &f| {
        acc.saturating_add(paths_to(k, v, f, tau, &mut memo))
    })
}

/// Paths from a p-cell `start` to `tau`, memoised. Iterative post-order so
/// long gradient chains do not exhaust the stack.
fn paths_to(
    k: &CellComplex,
    v: &GradientField,
    start: CellId,
    tau: CellId,
    memo: &mut HashMap<CellId, u64>,
) -> u64 {
    let successors = |c: CellId| -> Vec<CellId> {
        match v.head_of(c) {
            Some(h) if c != tau => k.faces(h).iter().copied().filter(|&f| f != c).collect(),
            _ => Vec::new(),
        }
    };
    let mut stack = vec![(start, false)];
    while let Some((c, expanded)) = stack.pop() {
        if memo.contains_key(&c) {
            continue;
        }
        if c == tau {
            memo.insert(c, 1);
            continue;
        }
        let succ = successors(c);
        if expanded {
            let total = succ.iter().fold(0u64, |acc, f| acc.saturating_add(memo[f]));
            memo.insert(c, total);
        } else {
            stack.push((c, true));
            for f in succ {
                if !memo.contains_key(&f) {
                    stack.push((f, false));
                }
            }
        }
    }
    memo[&start]
}

/// Reverses the arrows along the unique V-path from `sigma` to `tau`,
/// making both regular.
pub fn cancel(
    k: &CellComplex,
    v: &GradientField,
    sigma: CellId,
    tau: CellId,
) -> Result<GradientField, MorseError> {
    for c in [sigma, tau] {
        if !k.contains(c) {
            return Err(MorseError::UnknownCell { cell: c });
        }
        if !v.is_critical(c) {
            return Err(MorseError::NotCritical { cell: c });
        }
    }
    if k.dim(sigma) != k.dim(tau) + 1 {
        return Err(MorseError::IndexMismatch {
            upper: sigma,
            lower: tau,
        });
    }
    let mut memo = HashMap::new();
    let mut total = 0u64;
    for &f in k.faces(sigma) {
        total = total.saturating_add(paths_to(k, v, f, tau, &mut memo));
    }
    match total {
        0 => {
            return Err(MorseError::NotCancellable {
                upper: sigma,
                lower: tau,
            })
        }
        1 => {}
        paths => {
            return Err(MorseError::Ambiguous {
                upper: sigma,
                lower: tau,
                paths,
            })
        }
    }

    // Walk the cells with a nonzero count: exactly one choice at each step.
    let pick = |cells: &[CellId], skip: CellId, memo: &HashMap<CellId, u64>| {
        *cells
            .iter()
            .find(|&&f| f != skip && memo.get(&f).copied().unwrap_or(0) > 0)
            .unwrap()
    };
    let mut tails = vec![pick(k.faces(sigma), sigma, &memo)];
    let mut heads = vec![sigma];
    while *tails.last().unwrap() != tau {
        let t = *tails.last().unwrap();
        let h = v.head_of(t).unwrap();
        heads.push(h);
        tails.push(pick(k.faces(h), t, &memo));
    }

    let mut out = v.clone();
    for &t in &tails[..tails.len() - 1] {
        out.clear(t);
    }
    for (&t, &h) in tails.iter().zip(&heads) {
        out.set_pair(t, h);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplifyOutcome {
    pub field: GradientField,
    /// Cancelled `(upper, lower)` pairs in order.
    pub cancelled: Vec<(CellId, CellId)>,
}

/// Repeatedly cancels the uniquely connected critical pair with the smallest
/// value gap below `threshold`.
pub fn simplify(
    k: &CellComplex,
    v: &GradientField,
    threshold: f64,
    f: &MorseFunction,
) -> SimplifyOutcome {
    let mut field = v.clone();
    let mut cancelled = Vec::new();
    loop {
        let mut best: Option<(f64, CellId, CellId)> = None;
        for sigma in field.critical_cells().filter(|&c| k.dim(c) > 0) {
            for (tau, count) in critical_reach(k, &field, sigma) {
                let gap = f.value(sigma) - f.value(tau);
                if count != 1 || gap >= threshold {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((g, s, t)) => gap
                        .total_cmp(&g)
                        .then(sigma.cmp(&s))
                        .then(tau.cmp(&t))
                        .is_lt(),
                };
                if better {
                    best = Some((gap, sigma, tau));
                }
            }
        }
        let Some((_, sigma, tau)) = best else { break };
        field = cancel(k, &field, sigma, tau).expect("pair has a unique path");
        cancelled.push((sigma, tau));
    }
    SimplifyOutcome { field, cancelled }
}

/// Path counts from the faces of `sigma` to every critical cell reached.
fn critical_reach(k: &CellComplex, v: &GradientField, sigma: CellId) -> Vec<(CellId, u64)> {
    let next = |c: CellId| -> Vec<CellId> {
        match v.head_of(c) {
            Some(h) => k.faces(h).iter().copied().filter(|&f| f != c).collect(),
            None => Vec::new(),
        }
    };
    // Reachable p-cells, then in-degrees within the reachable graph.
    let mut reached: Vec<CellId> = k.faces(sigma).to_vec();
    let mut seen: HashSet<CellId> = reached.iter().copied().collect();
    let mut i = 0;
    while i < reached.len() {
        for n in next(reached[i]) {
            if seen.insert(n) {
                reached.push(n);
            }
        }
        i += 1;
    }
    let mut indegree: HashMap<CellId, usize> = reached.iter().map(|&c| (c, 0)).collect();
    for &c in &reached {
        for n in next(c) {
            *indegree.get_mut(&n).unwrap() += 1;
        }
    }
    let mut count: HashMap<CellId, u64> = k.faces(sigma).iter().map(|&f| (f, 1)).collect();
    let mut ready: Vec<CellId> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&c, _)| c)
        .collect();
    ready.sort();
    let mut out = Vec::new();
    while let Some(c) = ready.pop() {
        let here = count.get(&c).copied().unwrap_or(0);
        if v.is_critical(c) {
            out.push((c, here));
        }
        for n in next(c) {
            let e = count.entry(n).or_insert(0);
            *e = e.saturating_add(here);
            let d = indegree.get_mut(&n).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(n);
            }
        }
    }
    out.sort();
    out
}
