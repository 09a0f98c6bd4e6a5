use super::{Basis, Term};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct TermLimits {
    pub max_terms: usize,
}

impl Default for TermLimits {
    fn default() -> Self {
        TermLimits { max_terms: 2_000_000 }
    }
}

/// Every term over `basis` and `symbols` with at most `max_size` nodes.
///
/// Order: by size; within a size, symbols (sorted), then constants, then unary operations,
/// then binary operations, each in catalogue order with arguments in enumeration order.
pub fn enumerate_terms(basis: Basis, symbols: &[String], max_size: usize, limits: TermLimits) -> Result<Vec<Term>> {
    if max_size == 0 {
        return Err(Error::InvalidParameter("max_size must be at least 1".into()));
    }
    let mut syms = symbols.to_vec();
    syms.sort();
    syms.dedup();
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    by_size[1] = syms
        .iter()
        .map(|s| Term::sym(s))
        .chain(basis.constants().map(Term::Const))
        .collect();
    let mut total = by_size[1].len();
    for size in 2..=max_size {
        let mut layer = Vec::new();
        for op in basis.unary() {
            layer.extend(by_size[size - 1].iter().map(|t| Term::unary(op, t.clone())));
        }
        for op in basis.binary() {
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for l in &by_size[left] {
                    for r in &by_size[right] {
                        layer.push(Term::binary(op, l.clone(), r.clone()));
                    }
                }
                if total + layer.len() > limits.max_terms {
                    return Err(Error::BoundExceeded {
                        what: "term enumeration",
                        value: total + layer.len(),
                        bound: limits.max_terms,
                    });
                }
            }
        }
        total += layer.len();
        if total > limits.max_terms {
            return Err(Error::BoundExceeded {
                what: "term enumeration",
                value: total,
                bound: limits.max_terms,
            });
        }
        by_size[size] = layer;
    }
    Ok(by_size.into_iter().flatten().collect())
}

/// A random term over the basis with roughly `size` nodes (exactly, when the basis allows it).
pub fn random_term<R: Rng>(rng: &mut R, basis: Basis, symbols: &[String], size: usize) -> Term {
    let unary: Vec<_> = basis.unary().collect();
    let binary: Vec<_> = basis.binary().collect();
    let can_unary = size >= 2 && !unary.is_empty();
    let can_binary = size >= 3 && !binary.is_empty();
    if can_binary && (!can_unary || rng.gen_bool(0.6)) {
        let op = *binary.choose(rng).unwrap();
        let left = rng.gen_range(1..size - 1);
        let l = random_term(rng, basis, symbols, left);
        let r = random_term(rng, basis, symbols, size - 1 - left);
        return Term::binary(op, l, r);
    }
    if can_unary {
        let op = *unary.choose(rng).unwrap();
        return Term::unary(op, random_term(rng, basis, symbols, size - 1));
    }
    let consts: Vec<_> = basis.constants().collect();
    let pick = rng.gen_range(0..symbols.len() + consts.len().max(1));
    match symbols.get(pick) {
        Some(s) => Term::sym(s),
        None => consts.get(pick - symbols.len()).map_or_else(Term::id, |&op| Term::Const(op)),
    }
}
