use crate::error::{Error, Result};
use crate::logic::{eval_formula, parse_formula, Formula};
use crate::structures::{ball, isomorphism, Mode, Structure};
use serde_json::{json, Value};
use std::collections::HashMap;

/// `φ(u)`, with the counting quantifier `∃^{≥2}s` spelled as two witnesses and a disequality.
pub fn phi_u() -> Formula {
    parse_formula(
        "R3(u,u) \
         & (forall v. (R3(u,v) -> exists w. (R3(v,w) & R2(w,v)))) \
         & (forall v. forall w. (R3(u,v) & R3(v,w) -> R3(u,w))) \
         & !(exists v. R2(u,v)) \
         & (forall v. forall w. (R3(u,v) & (exists s. exists t. (R2(v,s) & R2(v,t) & s!=t)) & R1(u,w) -> R4(w,v)))",
    )
    .expect("fixed formula parses")
}

/// `ψ(x,y) := x=y ∧ ∃u (R1(u,x) ∧ φ(u))`.
pub fn psi_xy() -> Formula {
    Formula::eq("x", "y").and(Formula::exists("u", Formula::atom("R1", "u", "x").and(phi_u())))
}

fn b(i: usize) -> String {
    format!("b{i}")
}

/// The structure over `{R1, R2, R3, R4}` with elements `a, b0, …, b_{n+k}`; returns it with `a`.
///
/// `R1: b0→a`; `R2: b_{i+1}→b_i` plus `b_n→b_{n+k}`; `R3`: a loop at `b0`, `b0→b_i` for all
/// `i ≥ 1`, and the successor edges `b_i→b_{i+1}`, `b_{n+k}→b_n` that give every `R3`-target
/// of `b0` its own `R3`-step back along an `R2` edge; `R4: a→b_n`.
pub fn build_fig2(n: usize, k: usize) -> Result<(Structure, String)> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!("n and k must be positive, got n={n}, k={k}")));
    }
    let top = n + k;
    let mut names = vec!["a".to_string()];
    names.extend((0..=top).map(b));
    let r1 = vec![(b(0), "a".to_string())];
    let mut r2: Vec<(String, String)> = (0..top).map(|i| (b(i + 1), b(i))).collect();
    r2.push((b(n), b(top)));
    let mut r3: Vec<(String, String)> = (0..=top).map(|i| (b(0), b(i))).collect();
    r3.extend((1..top).map(|i| (b(i), b(i + 1))));
    r3.push((b(top), b(n)));
    let r4 = vec![("a".to_string(), b(n))];
    let s = Structure::new(names, [("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4)])?;
    Ok((s, "a".to_string()))
}

/// Deletes `b0` and every pair touching it.
pub fn remove_b0(a: &Structure) -> Result<Structure> {
    let gone = a.index_of("b0")?;
    let keep: Vec<usize> = (0..a.size()).filter(|&i| i != gone).collect();
    Ok(a.induced(&keep))
}

/// Outcome of comparing `A = build_fig2(m+1, 2)` with `B = remove_b0(A)` at radius `m`.
#[derive(Clone, Debug)]
pub struct Fig2Replay {
    pub m: usize,
    pub psi_in_a: bool,
    pub psi_in_b: bool,
    pub balls_isomorphic: bool,
    pub ball_size: usize,
}

impl Fig2Replay {
    pub fn confirmed(&self) -> bool {
        self.psi_in_a && !self.psi_in_b && self.balls_isomorphic
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": 1,
            "m": self.m,
            "psi_in_a": self.psi_in_a,
            "psi_in_b": self.psi_in_b,
            "balls_isomorphic": self.balls_isomorphic,
            "ball_size": self.ball_size,
            "confirmed": self.confirmed(),
        })
    }
}

pub fn replay_fig2(m: usize) -> Result<Fig2Replay> {
    let (a, root) = build_fig2(m + 1, 2)?;
    let b = remove_b0(&a)?;
    let psi = psi_xy();
    let at: HashMap<String, String> = [("x", &root), ("y", &root)]
        .into_iter()
        .map(|(v, e)| (v.to_string(), e.clone()))
        .collect();
    let (ball_a, ball_b) = (ball(&a, &root, m, Mode::Forward)?, ball(&b, &root, m, Mode::Forward)?);
    Ok(Fig2Replay {
        m,
        psi_in_a: eval_formula(&psi, &a, &at)?,
        psi_in_b: eval_formula(&psi, &b, &at)?,
        balls_isomorphic: isomorphism(&ball_a, &[root.as_str()], &ball_b, &[root.as_str()])?.is_some(),
        ball_size: ball_a.size(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_holds_at_b0() {
        let (a, _) = build_fig2(3, 2).unwrap();
        let env: HashMap<String, String> = [("u".to_string(), "b0".to_string())].into();
        assert!(eval_formula(&phi_u(), &a, &env).unwrap());
        assert_eq!(psi_xy().free_vars().len(), 2);
    }

    #[test]
    fn replays() {
        for m in 1..=3 {
            let r = replay_fig2(m).unwrap();
            assert!(r.confirmed(), "{r:?}");
            assert!(r.ball_size >= m);
        }
    }

    #[test]
    fn radius_m_plus_2_sees_the_difference() {
        let (a, root) = build_fig2(3, 2).unwrap();
        let b = remove_b0(&a).unwrap();
        let (x, y) = (ball(&a, &root, 4, Mode::Forward).unwrap(), ball(&b, &root, 4, Mode::Forward).unwrap());
        assert!(isomorphism(&x, &["a"], &y, &["a"]).unwrap().is_none());
    }
}
