use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

use super::chain::JointChain;
use super::ValueVector;

/// Strongly connected components, each listed before any component that
/// can reach it.
pub(crate) fn sccs(chain: &JointChain) -> Vec<Vec<usize>> {
    let n = chain.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (node, next edge to look at)
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, edge)) = work.last() {
            let ts = chain.transitions(v);
            if edge < ts.len() {
                let w = ts[edge].next;
                if let Some(top) = work.last_mut() {
                    top.1 += 1;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Exact discounted values of every state: `V = r + δ P V`.
pub fn exact_values(chain: &JointChain) -> Vec<ValueVector> {
    let delta = chain.discount();
    let mut values: Vec<Option<ValueVector>> = vec![None; chain.len()];
    for comp in sccs(chain) {
        if comp.len() == 1 {
            let s = comp[0];
            let mut rhs = chain.expected_payoff(s);
            let mut self_prob = Rational::zero();
            for t in chain.transitions(s) {
                if t.next == s {
                    self_prob += &t.prob;
                } else {
                    let v = values[t.next].as_ref().expect("successor solved first");
                    for (k, x) in rhs.iter_mut().enumerate() {
                        *x += delta * &t.prob * &v.0[k];
                    }
                }
            }
            let denom = Rational::one() - delta * self_prob;
            values[s] = Some(ValueVector(rhs.map(|x| x / &denom)));
            continue;
        }
        let pos = |s: usize| comp.binary_search(&s).ok();
        let k = comp.len();
        let mut a = vec![vec![Rational::zero(); k + 3]; k];
        for (row, &s) in comp.iter().enumerate() {
            a[row][row] += Rational::one();
            let r = chain.expected_payoff(s);
            for (j, x) in r.into_iter().enumerate() {
                a[row][k + j] += x;
            }
            for t in chain.transitions(s) {
                match pos(t.next) {
                    Some(col) => a[row][col] -= delta * &t.prob,
                    None => {
                        let v = values[t.next].as_ref().expect("successor solved first");
                        for j in 0..3 {
                            a[row][k + j] += delta * &t.prob * &v.0[j];
                        }
                    }
                }
            }
        }
        let x = solve_fraction_free(a, k, 3);
        for (row, &s) in comp.iter().enumerate() {
            values[s] = Some(ValueVector([x[row][0].clone(), x[row][1].clone(), x[row][2].clone()]));
        }
    }
    values.into_iter().map(|v| v.expect("every state solved")).collect()
}

/// Solves the `n × n` system in the left block of `aug` for each of the
/// `rhs` right-hand columns. Rows are scaled to integers, then eliminated
/// with Bareiss' exact-division rule.
fn solve_fraction_free(aug: Vec<Vec<Rational>>, n: usize, rhs: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<BigInt>> = aug
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.into_iter()
                .map(|q| (q * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let width = n + rhs;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let swap = (k + 1..n)
                .find(|&i| !m[i][k].is_zero())
                .expect("I - δP is nonsingular for δ < 1");
            m.swap(k, swap);
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![vec![Rational::zero(); rhs]; n];
    for i in (0..n).rev() {
        for c in 0..rhs {
            let mut acc = Rational::from_integer(m[i][n + c].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(m[i][j].clone()) * &x[j][c];
            }
            x[i][c] = acc / Rational::from_integer(m[i][i].clone());
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn bareiss_matches_hand_solution() {
        // 2x + y = 5, x + 3y = 10 -> x = 1, y = 3; second rhs: 2x + y = 1/2, x + 3y = 0
        let a = vec![
            vec![int(2), int(1), int(5), ratio(1, 2)],
            vec![int(1), int(3), int(10), int(0)],
        ];
        let x = solve_fraction_free(a, 2, 2);
        assert_eq!(x[0][0], int(1));
        assert_eq!(x[1][0], int(3));
        assert_eq!(x[0][1], ratio(3, 10));
        assert_eq!(x[1][1], ratio(-1, 10));
    }

    #[test]
    fn bareiss_pivots_past_zero() {
        let a = vec![vec![int(0), int(1), int(2)], vec![int(1), int(0), int(3)]];
        let x = solve_fraction_free(a, 2, 1);
        assert_eq!(x[0][0], int(3));
        assert_eq!(x[1][0], int(2));
    }
}
