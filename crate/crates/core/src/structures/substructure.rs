use super::{Domain, Relation, Structure};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, VecDeque};

/// Direction in which reachability is followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Forward,
    Undirected,
}

/// BFS distances from `start` up to `radius`; `None` means unreached.
pub(crate) fn distances(a: &Structure, start: usize, radius: usize, mode: Mode) -> Vec<Option<usize>> {
    let mut dist = vec![None; a.size()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        if d == radius {
            continue;
        }
        let visit = |v: usize, dist: &mut Vec<Option<usize>>, queue: &mut VecDeque<usize>| {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        };
        for (_, r) in a.relations() {
            for v in r.successors(u) {
                visit(v, &mut dist, &mut queue);
            }
            if mode == Mode::Undirected {
                for v in r.predecessors(u) {
                    visit(v, &mut dist, &mut queue);
                }
            }
        }
    }
    dist
}

/// Induced substructure on the elements within `radius` steps of `a`.
pub fn ball(s: &Structure, a: &str, radius: usize, mode: Mode) -> Result<Structure> {
    let start = s.index_of(a)?;
    let dist = distances(s, start, radius, mode);
    let keep: Vec<usize> = (0..s.size()).filter(|&i| dist[i].is_some()).collect();
    Ok(s.induced(&keep))
}

/// Induced substructure on everything reachable from `a`.
pub fn generated_substructure(s: &Structure, a: &str, mode: Mode) -> Result<Structure> {
    ball(s, a, s.size(), mode)
}

/// Disjoint union with elements tagged `L:` and `R:`.
pub fn disjoint_union(left: &Structure, right: &Structure) -> Result<Structure> {
    let (ls, rs) = (left.signature(), right.signature());
    if ls != rs {
        return Err(Error::SignatureMismatch { left: ls, right: rs });
    }
    let n = left.size();
    let names = left
        .domain()
        .names()
        .iter()
        .map(|x| format!("L:{x}"))
        .chain(right.domain().names().iter().map(|x| format!("R:{x}")))
        .collect();
    let domain = Domain::new(names)?;
    let total = domain.len();
    let lmap: Vec<Option<usize>> = (0..n).map(Some).collect();
    let rmap: Vec<Option<usize>> = (0..right.size()).map(|i| Some(n + i)).collect();
    let relations: BTreeMap<String, Relation> = left
        .relations()
        .map(|(name, r)| {
            let joined = r
                .remap(&lmap, total)
                .union(&right.relation(name).unwrap().remap(&rmap, total));
            (name.to_string(), joined)
        })
        .collect();
    Ok(Structure::from_parts(domain, relations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> Structure {
        Structure::from_lists(&["1", "2", "3"], &[("R", &[("1", "2"), ("2", "3")])]).unwrap()
    }

    #[test]
    fn forward_generated() {
        let a = Structure::from_lists(&["1", "2"], &[("R", &[("1", "2")])]).unwrap();
        let g1 = generated_substructure(&a, "1", Mode::Forward).unwrap();
        assert_eq!(g1, a);
        let g2 = generated_substructure(&a, "2", Mode::Forward).unwrap();
        assert_eq!(g2, Structure::from_lists(&["2"], &[("R", &[])]).unwrap());
        let u2 = generated_substructure(&a, "2", Mode::Undirected).unwrap();
        assert_eq!(u2, a);
    }

    #[test]
    fn balls_by_radius() {
        let a = path();
        let b1 = ball(&a, "1", 1, Mode::Forward).unwrap();
        assert_eq!(b1, Structure::from_lists(&["1", "2"], &[("R", &[("1", "2")])]).unwrap());
        let b0 = ball(&a, "1", 0, Mode::Forward).unwrap();
        assert_eq!(b0, Structure::from_lists(&["1"], &[("R", &[])]).unwrap());
    }

    #[test]
    fn unknown_element() {
        let err = ball(&path(), "9", 1, Mode::Forward).unwrap_err();
        assert_eq!(err.to_string(), "element not in domain: 9");
    }

    #[test]
    fn union_sizes_and_tags() {
        let a = Structure::from_lists(&["1", "2"], &[("R", &[("1", "2")])]).unwrap();
        let b = path();
        let u = disjoint_union(&a, &b).unwrap();
        assert_eq!(u.size(), 5);
        assert_eq!(u.relation("R").unwrap().len(), 3);
        assert!(u.index_of("L:1").is_ok() && u.index_of("R:3").is_ok());
        let e = Structure::from_lists(&["x"], &[("S", &[])]).unwrap();
        assert!(matches!(disjoint_union(&a, &e), Err(Error::SignatureMismatch { .. })));
    }
}
