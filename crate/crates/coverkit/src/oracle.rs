//! Independent ground-truth procedures for cross-validating engine verdicts
//! on small instances: the classical Karp-Miller tree for VAS and a bounded
//! forward search for general affine nets.

use std::collections::HashSet;
use std::collections::VecDeque;

use thiserror::Error;

use crate::ideal::{DimMismatch, Nat, NatVec, OmegaNat, OmegaVec};
use crate::models::{AffineNet, ModelError, Vas};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Dim(#[from] DimMismatch),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A node of a Karp-Miller tree: its (possibly accelerated) label and the
/// successor subtree per enabled action index.
#[derive(Debug, Clone)]
pub struct KmNode {
    pub label: OmegaVec,
    pub children: Vec<(usize, KmNode)>,
}

impl KmNode {
    /// Number of nodes in the subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    fn any_label(&self, pred: &mut impl FnMut(&OmegaVec) -> bool) -> bool {
        pred(&self.label) || self.children.iter().any(|(_, c)| c.any_label(pred))
    }
}

/// Build the Karp-Miller tree of a VAS from `root`.
///
/// The construction is the classical one: a successor label is accelerated
/// against every strictly dominated ancestor (the strictly grown components
/// become omega, repeatedly until stable), and a branch stops when its label
/// equals an ancestor label. No cross-branch pruning is performed.
pub fn karp_miller_tree(vas: &Vas, root: &NatVec) -> Result<KmNode, OracleError> {
    if root.len() != vas.dim() {
        return Err(DimMismatch { left: vas.dim(), right: root.len() }.into());
    }
    let mut path = Vec::new();
    Ok(build_node(vas, root.to_ideal(), &mut path, &mut |_| false))
}

/// Does `s` cover `t` in the VAS? Decided by Karp-Miller tree construction
/// with an early exit as soon as some label dominates `t`.
pub fn karp_miller_covers(vas: &Vas, s: &NatVec, t: &NatVec) -> Result<bool, OracleError> {
    if s.len() != vas.dim() {
        return Err(DimMismatch { left: vas.dim(), right: s.len() }.into());
    }
    if t.len() != vas.dim() {
        return Err(DimMismatch { left: vas.dim(), right: t.len() }.into());
    }
    let target = t.clone();
    let mut found = false;
    let mut path = Vec::new();
    let tree = build_node(vas, s.to_ideal(), &mut path, &mut |label| {
        found |= ideal_covers(label, &target);
        found
    });
    debug_assert!(found || !tree.any_label(&mut |l| ideal_covers(l, &target)));
    Ok(found)
}

fn ideal_covers(label: &OmegaVec, t: &NatVec) -> bool {
    label.comps().iter().zip(t.comps()).all(|(c, want)| match c {
        OmegaNat::Omega => true,
        OmegaNat::Fin(n) => n >= want,
    })
}

/// Label arithmetic: add an action, omega components stay omega; `None` when
/// a finite component would go negative.
fn label_step(label: &OmegaVec, action: &[crate::models::Int]) -> Option<OmegaVec> {
    let mut out = Vec::with_capacity(label.len());
    for (c, a) in label.comps().iter().zip(action) {
        match c {
            OmegaNat::Omega => out.push(OmegaNat::Omega),
            OmegaNat::Fin(n) => {
                let sum = num_bigint::BigInt::from(n.clone()) + a;
                out.push(OmegaNat::Fin(sum.to_biguint()?));
            }
        }
    }
    Some(OmegaVec::new(out))
}

fn accelerate(label: &OmegaVec, path: &[OmegaVec]) -> OmegaVec {
    let mut accelerated = label.clone();
    loop {
        let mut changed = false;
        for ancestor in path {
            if ancestor.leq(&accelerated).expect("tree labels share dim") && *ancestor != accelerated
            {
                let comps = accelerated
                    .comps()
                    .iter()
                    .zip(ancestor.comps())
                    .map(|(new, old)| {
                        if new > old {
                            OmegaNat::Omega
                        } else {
                            new.clone()
                        }
                    })
                    .collect();
                let next = OmegaVec::new(comps);
                if next != accelerated {
                    accelerated = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return accelerated;
        }
    }
}

fn build_node(
    vas: &Vas,
    label: OmegaVec,
    path: &mut Vec<OmegaVec>,
    stop: &mut impl FnMut(&OmegaVec) -> bool,
) -> KmNode {
    if stop(&label) || path.contains(&label) {
        return KmNode { label, children: Vec::new() };
    }
    path.push(label.clone());
    let mut children = Vec::new();
    for (idx, action) in vas.actions().iter().enumerate() {
        if let Some(next) = label_step(&label, action) {
            let accelerated = accelerate(&next, path);
            children.push((idx, build_node(vas, accelerated, path, stop)));
        }
    }
    path.pop();
    KmNode { label, children }
}

/// Result of a depth- and norm-bounded forward search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverSearch {
    /// A covering configuration was reached; always sound.
    Yes,
    /// The whole forward closure was explored without covering the target.
    NoWithinBounds,
    /// The search was truncated by the depth or norm bound before covering.
    Unknown,
}

/// Breadth-first forward exploration of an affine net from `s`, looking for a
/// configuration above `t`. Configurations beyond `norm_cap` are recorded but
/// not expanded; exhausting the closure without truncation is a definitive
/// "no".
pub fn bounded_forward_covers(
    net: &AffineNet,
    s: &NatVec,
    t: &NatVec,
    depth: usize,
    norm_cap: &Nat,
) -> Result<CoverSearch, OracleError> {
    if s.len() != net.dim() {
        return Err(DimMismatch { left: net.dim(), right: s.len() }.into());
    }
    if t.len() != net.dim() {
        return Err(DimMismatch { left: net.dim(), right: t.len() }.into());
    }
    let mut visited: HashSet<Vec<Nat>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut truncated = false;
    visited.insert(s.comps().to_vec());
    queue.push_back((s.clone(), 0usize));
    while let Some((u, k)) = queue.pop_front() {
        if t.leq(&u)? {
            return Ok(CoverSearch::Yes);
        }
        if u.norm() > *norm_cap || k == depth {
            truncated = true;
            continue;
        }
        for v in net.successors(&u)? {
            if visited.insert(v.comps().to_vec()) {
                queue.push_back((v, k + 1));
            }
        }
    }
    if truncated {
        Ok(CoverSearch::Unknown)
    } else {
        Ok(CoverSearch::NoWithinBounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{AffineTransition, Int};

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn nv(spec: &str) -> NatVec {
        NatVec::new(spec.split_whitespace().map(|t| t.parse().unwrap()).collect())
    }

    fn ints(spec: &str) -> Vec<Int> {
        spec.split_whitespace().map(|t| t.parse().unwrap()).collect()
    }

    fn vas_div2() -> Vas {
        Vas::new(2, vec![ints("-2 1")]).unwrap()
    }

    fn net3() -> AffineNet {
        AffineNet::new(
            2,
            vec![AffineTransition::new(
                nv("0 0"),
                vec![vec![nat(1), nat(1)], vec![nat(2), nat(0)]],
                nv("0 0"),
            )
            .unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn km_covers_examples() {
        let vas = vas_div2();
        assert!(karp_miller_covers(&vas, &nv("10 0"), &nv("0 5")).unwrap());
        assert!(!karp_miller_covers(&vas, &nv("9 0"), &nv("0 5")).unwrap());
        assert!(karp_miller_covers(&vas, &nv("3 4"), &nv("3 4")).unwrap());
        assert!(karp_miller_covers(&vas, &nv("4 4"), &nv("3 4")).unwrap());
    }

    #[test]
    fn km_accelerates_unbounded_growth() {
        let vas = Vas::new(2, vec![ints("1 0"), ints("-3 2")]).unwrap();
        // pumping the first component makes every (n, m) coverable
        assert!(karp_miller_covers(&vas, &nv("0 0"), &nv("50 50")).unwrap());
        let tree = karp_miller_tree(&vas, &nv("0 0")).unwrap();
        assert!(tree.size() > 1);
        // accelerated components only grow along ancestor paths
        fn check_paths(node: &KmNode, ancestors: &mut Vec<OmegaVec>) {
            for anc in ancestors.iter() {
                for (a, b) in anc.comps().iter().zip(node.label.comps()) {
                    if a.is_omega() {
                        assert!(b.is_omega(), "omega was lost along a path");
                    }
                }
            }
            ancestors.push(node.label.clone());
            for (_, c) in &node.children {
                check_paths(c, ancestors);
            }
            ancestors.pop();
        }
        check_paths(&tree, &mut Vec::new());
    }

    #[test]
    fn km_tree_is_finite_on_bounded_closure() {
        let tree = karp_miller_tree(&vas_div2(), &nv("9 0")).unwrap();
        // forward closure of (9,0) is five configurations on a line
        assert_eq!(tree.size(), 5);
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(
            bounded_forward_covers(&net3(), &nv("1 0"), &nv("0 1"), 2, &nat(100)).unwrap(),
            CoverSearch::Yes
        );
        let zero = Vas::new(2, vec![]).unwrap().to_affine();
        assert_eq!(
            bounded_forward_covers(&zero, &nv("0 0"), &nv("0 0"), 0, &nat(1)).unwrap(),
            CoverSearch::Yes
        );
        assert_eq!(
            bounded_forward_covers(&vas_div2().to_affine(), &nv("9 0"), &nv("0 5"), 10, &nat(20))
                .unwrap(),
            CoverSearch::NoWithinBounds
        );
    }

    #[test]
    fn bfs_reports_truncation() {
        // a pure growth net never covers (0, 1); cutting it off is "unknown"
        let grow = Vas::new(2, vec![ints("1 0")]).unwrap().to_affine();
        assert_eq!(
            bounded_forward_covers(&grow, &nv("0 0"), &nv("0 1"), 3, &nat(100)).unwrap(),
            CoverSearch::Unknown
        );
        assert_eq!(
            bounded_forward_covers(&grow, &nv("0 0"), &nv("0 1"), 1000, &nat(5)).unwrap(),
            CoverSearch::Unknown
        );
    }
}
