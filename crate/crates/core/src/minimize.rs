//! Minimization of Mealy automata by partition refinement.

use std::collections::HashMap;

use crate::automaton::MealyAutomaton;

/// Behavioral equivalence classes: `class[q]` is the class of state `q`.
/// Classes are numbered by their smallest member.
pub fn equivalence_classes(a: &MealyAutomaton) -> Vec<usize> {
    table_classes(a.num_states(), a.degree(), a.next_table(), a.out_table())
}

/// Partition refinement over raw row-major tables (Hopcroft's algorithm):
/// start from the partition by output rows and split blocks by their
/// predecessors under each letter until stable.
pub(crate) fn table_classes(n: usize, d: usize, next: &[usize], out: &[usize]) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // Predecessor lists per letter, in compressed form.
    let mut pred_start = vec![0usize; d * (n + 1)];
    for q in 0..n {
        for x in 0..d {
            pred_start[x * (n + 1) + next[q * d + x] + 1] += 1;
        }
    }
    for x in 0..d {
        for p in 0..n {
            pred_start[x * (n + 1) + p + 1] += pred_start[x * (n + 1) + p];
        }
    }
    let mut fill = pred_start.clone();
    let mut preds = vec![0usize; n * d];
    for q in 0..n {
        for x in 0..d {
            let slot = &mut fill[x * (n + 1) + next[q * d + x]];
            preds[x * n + *slot] = q;
            *slot += 1;
        }
    }

    // Blocks are contiguous ranges of `elems`.
    let initial = number_by_key(n, |q| out[q * d..(q + 1) * d].to_vec());
    let mut elems: Vec<usize> = (0..n).collect();
    elems.sort_by_key(|&q| initial[q]);
    let mut pos = vec![0usize; n];
    for (i, &q) in elems.iter().enumerate() {
        pos[q] = i;
    }
    let mut block = initial;
    let mut start = Vec::new();
    let mut end = Vec::new();
    for (i, &q) in elems.iter().enumerate() {
        if block[q] == start.len() {
            start.push(i);
            end.push(i + 1);
        } else {
            end[block[q]] = i + 1;
        }
    }

    let mut pending: Vec<(usize, usize)> = Vec::new();
    let mut queued: Vec<bool> = Vec::new();
    for b in 0..start.len() {
        for x in 0..d {
            pending.push((b, x));
        }
        queued.extend(std::iter::repeat_n(true, d));
    }
    let mut marked = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut splitter: Vec<usize> = Vec::new();
    while let Some((b, x)) = pending.pop() {
        queued[b * d + x] = false;
        splitter.clear();
        splitter.extend_from_slice(&elems[start[b]..end[b]]);
        for &p in &splitter {
            let range = pred_start[x * (n + 1) + p]..pred_start[x * (n + 1) + p + 1];
            for &q in &preds[x * n + range.start..x * n + range.end] {
                let c = block[q];
                // Move q to the marked prefix of its block.
                let target = start[c] + marked[c];
                if pos[q] < target {
                    continue;
                }
                if marked[c] == 0 {
                    touched.push(c);
                }
                let other = elems[target];
                elems.swap(pos[q], target);
                pos[other] = pos[q];
                pos[q] = target;
                marked[c] += 1;
            }
        }
        for c in touched.drain(..) {
            let count = std::mem::take(&mut marked[c]);
            if count == end[c] - start[c] {
                continue;
            }
            let new = start.len();
            start.push(start[c]);
            end.push(start[c] + count);
            start[c] += count;
            for &q in &elems[start[new]..end[new]] {
                block[q] = new;
            }
            for y in 0..d {
                queued.push(false);
                let smaller = if end[new] - start[new] <= end[c] - start[c] {
                    new
                } else {
                    c
                };
                let chosen = if queued[c * d + y] { new } else { smaller };
                queued[chosen * d + y] = true;
                pending.push((chosen, y));
            }
        }
    }

    // Renumber classes by their smallest member.
    let mut id = vec![usize::MAX; start.len()];
    let mut count = 0;
    (0..n)
        .map(|q| {
            if id[block[q]] == usize::MAX {
                id[block[q]] = count;
                count += 1;
            }
            id[block[q]]
        })
        .collect()
}

fn number_by_key(n: usize, key: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    (0..n)
        .map(|q| {
            let next_id = ids.len();
            *ids.entry(key(q)).or_insert(next_id)
        })
        .collect()
}

/// Quotient by behavioral equivalence. Each class is named after its first
/// member; the returned map sends every original state to its class.
pub fn minimize(a: &MealyAutomaton) -> (MealyAutomaton, Vec<usize>) {
    let class = equivalence_classes(a);
    let m = class.iter().max().map_or(0, |c| c + 1);
    let d = a.degree();
    let mut rep = vec![usize::MAX; m];
    for (q, &c) in class.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = q;
        }
    }
    let mut next = Vec::with_capacity(m * d);
    let mut out = Vec::with_capacity(m * d);
    for &q in &rep {
        next.extend(a.next_row(q).iter().map(|&p| class[p]));
        out.extend_from_slice(a.out_row(q));
    }
    let names = rep.iter().map(|&q| a.state_name(q).to_string()).collect();
    (MealyAutomaton::from_flat(names, a.letters().to_vec(), next, out), class)
}

pub fn is_minimal(a: &MealyAutomaton) -> bool {
    let class = equivalence_classes(a);
    class.iter().enumerate().all(|(q, &c)| q == c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wreath::parse_wreath;

    #[test]
    fn b_is_minimal() {
        let (m, map) = minimize(&catalog::automaton_b());
        assert_eq!(m.num_states(), 4);
        assert_eq!(map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn duplicate_states_merge() {
        let a = parse_wreath("x=(y,x)(1,2); y=(x,y)(1,2)").unwrap();
        let (m, map) = minimize(&a);
        assert_eq!(m.num_states(), 1);
        assert_eq!(map, vec![0, 0]);
        assert_eq!(m.states(), ["x"]);
    }

    #[test]
    fn identity_states_collapse() {
        let a = parse_wreath("p=(q,p); q=(p,p); r=(r,p)(1,2)").unwrap();
        let (m, map) = minimize(&a);
        assert_eq!(m.num_states(), 2);
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(m.next_row(1), &[1, 0]);
    }
}
