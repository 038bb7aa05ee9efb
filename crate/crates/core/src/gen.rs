//! Seeded random generators for proofs and linear λ-terms.
//!
//! Every generator takes an explicit RNG so that suites are reproducible
//! from a seed; use [`rng`] to get one.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::lambda::Term;
use crate::logic::{check_proof, Formula, Proof};

pub use rand::SeedableRng;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for proof generation.
#[derive(Copy, Clone, Debug)]
pub struct ProofConfig {
    /// Bound on [`Proof::logical_depth`].
    pub max_depth: usize,
    /// Atoms are drawn from the first `atoms` letters.
    pub atoms: usize,
}

impl Default for ProofConfig {
    fn default() -> Self {
        ProofConfig { max_depth: 6, atoms: 4 }
    }
}

const LETTERS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

fn atom(rng: &mut GenRng, cfg: &ProofConfig) -> Formula {
    Formula::atom(LETTERS[rng.gen_range(0..cfg.atoms.clamp(1, LETTERS.len()))])
}

fn small_formula(rng: &mut GenRng, cfg: &ProofConfig) -> Formula {
    match rng.gen_range(0..6) {
        0 => Formula::and(atom(rng, cfg), atom(rng, cfg)),
        1 => Formula::imp(atom(rng, cfg), atom(rng, cfg)),
        _ => atom(rng, cfg),
    }
}

fn hyps(p: &Proof) -> Vec<Formula> {
    check_proof(p).expect("generated proofs are valid").hyps
}

fn concl(p: &Proof) -> Formula {
    check_proof(p).expect("generated proofs are valid").concl
}

/// Moves hypothesis `from` to position `to` with exchanges.
fn move_hyp(mut p: Proof, from: usize, to: usize) -> Proof {
    let mut i = from;
    while i < to {
        p = Proof::ex(i, p);
        i += 1;
    }
    while i > to {
        p = Proof::ex(i - 1, p);
        i -= 1;
    }
    p
}

/// Makes `a` the last hypothesis of `p`: an existing occurrence is moved
/// there (sometimes two are contracted first), otherwise it is weakened in.
fn expose(rng: &mut GenRng, p: Proof, a: &Formula) -> Proof {
    let hs = hyps(&p);
    let at: Vec<usize> = hs.iter().enumerate().filter(|(_, h)| *h == a).map(|(i, _)| i).collect();
    let n = hs.len();
    match at.as_slice() {
        [] => Proof::w(a.clone(), p),
        [i] => move_hyp(p, *i, n - 1),
        [.., i, j] => {
            if rng.gen_bool(0.6) {
                let p = move_hyp(p, *j, n - 1);
                let p = move_hyp(p, *i, n - 2);
                Proof::c(n - 2, p)
            } else {
                move_hyp(p, *j, n - 1)
            }
        }
    }
}

fn proof_at(rng: &mut GenRng, cfg: &ProofConfig, budget: usize) -> Proof {
    if budget <= 1 {
        return Proof::ax(small_formula(rng, cfg));
    }
    let sub = budget - 1;
    match rng.gen_range(0..10) {
        0 if budget <= 3 => Proof::ax(small_formula(rng, cfg)),
        0..=2 => Proof::and_i(proof_at(rng, cfg, sub), proof_at(rng, cfg, sub)),
        3 | 4 => {
            let q = proof_at(rng, cfg, sub);
            match concl(&q) {
                Formula::And(..) if rng.gen_bool(0.5) => Proof::and_e1(q),
                Formula::And(..) => Proof::and_e2(q),
                c => {
                    let other = atom(rng, cfg);
                    if rng.gen_bool(0.5) {
                        Proof::and_e1(Proof::ax(Formula::and(c, other)))
                    } else {
                        Proof::and_e2(Proof::ax(Formula::and(other, c)))
                    }
                }
            }
        }
        5 | 6 => {
            let q = proof_at(rng, cfg, sub);
            let hs = hyps(&q);
            if hs.is_empty() || rng.gen_bool(0.2) {
                Proof::imp_i(Proof::w(atom(rng, cfg), q))
            } else {
                let h = hs.choose(rng).unwrap().clone();
                Proof::imp_i(expose(rng, q, &h))
            }
        }
        7 | 8 => {
            let arg = proof_at(rng, cfg, sub);
            let a = concl(&arg);
            let fun = if rng.gen_bool(0.5) {
                Proof::ax(Formula::imp(a, atom(rng, cfg)))
            } else {
                let body = proof_at(rng, cfg, budget.saturating_sub(2).max(1));
                Proof::imp_i(expose(rng, body, &a))
            };
            Proof::imp_e(fun, arg)
        }
        _ => {
            let q = proof_at(rng, cfg, sub);
            let hs = hyps(&q);
            match rng.gen_range(0..3) {
                0 => Proof::w(atom(rng, cfg), q),
                1 if hs.len() >= 2 => Proof::ex(rng.gen_range(0..hs.len() - 1), q),
                _ => match hs.windows(2).position(|w| w[0] == w[1]) {
                    Some(i) => Proof::c(i, q),
                    None => q,
                },
            }
        }
    }
}

fn bounded(rng: &mut GenRng, cfg: &ProofConfig, mut make: impl FnMut(&mut GenRng) -> Proof) -> Proof {
    loop {
        let p = make(rng);
        if p.logical_depth() <= cfg.max_depth {
            debug_assert!(check_proof(&p).is_ok(), "{p}");
            return p;
        }
    }
}

/// A random valid proof of depth at most `cfg.max_depth`.
pub fn random_proof(rng: &mut GenRng, cfg: &ProofConfig) -> Proof {
    bounded(rng, cfg, |rng| {
        let budget = rng.gen_range(cfg.max_depth.saturating_sub(2).max(1)..=cfg.max_depth);
        proof_at(rng, cfg, budget)
    })
}

/// A random valid proof whose last rule eliminates a connective introduced
/// right above it.
pub fn random_root_detour(rng: &mut GenRng, cfg: &ProofConfig) -> Proof {
    bounded(rng, cfg, |rng| {
        let top = cfg.max_depth.saturating_sub(2).max(1);
        let budget = rng.gen_range(top.saturating_sub(2).max(1)..=top);
        match rng.gen_range(0..5) {
            0 => Proof::and_e1(Proof::and_i(proof_at(rng, cfg, budget), proof_at(rng, cfg, budget))),
            1 => Proof::and_e2(Proof::and_i(proof_at(rng, cfg, budget), proof_at(rng, cfg, budget))),
            2 => {
                // The discharged hypothesis is used twice, so the argument
                // has to be copied.
                let sub = budget.saturating_sub(1).max(1);
                let left = proof_at(rng, cfg, sub);
                let a = hyps(&left).choose(rng).cloned().unwrap_or_else(|| small_formula(rng, cfg));
                let left = expose(rng, left, &a);
                let right = if rng.gen_bool(0.5) {
                    Proof::ax(a.clone())
                } else {
                    Proof::and_i(proof_at(rng, cfg, sub.saturating_sub(1).max(1)), Proof::ax(a.clone()))
                };
                let arg = match rng.gen_range(0..3) {
                    0 => Proof::ax(a.clone()),
                    1 => {
                        let q = proof_at(rng, cfg, sub);
                        Proof::imp_e(Proof::ax(Formula::imp(concl(&q), a.clone())), q)
                    }
                    _ => Proof::and_e1(Proof::ax(Formula::and(a.clone(), atom(rng, cfg)))),
                };
                let split = hyps(&left).len();
                let body = Proof::and_i(left, right);
                let n = hyps(&body).len();
                let body = Proof::c(n - 2, move_hyp(body, split - 1, n - 2));
                Proof::imp_e(Proof::imp_i(body), arg)
            }
            _ => {
                let arg = proof_at(rng, cfg, budget);
                let a = concl(&arg);
                let body = proof_at(rng, cfg, budget);
                Proof::imp_e(Proof::imp_i(expose(rng, body, &a)), arg)
            }
        }
    })
}

/// A random linear term with at most `max_size` nodes (see
/// [`Term::size`]). Some terms are open; every variable occurs once.
pub fn random_linear_term(rng: &mut GenRng, max_size: usize) -> Term {
    loop {
        let mut fresh = 0;
        let free = rng.gen_range(0..=2);
        let vars: Vec<String> = (0..free).map(|i| format!("f{i}")).collect();
        let budget = rng.gen_range(3..=max_size.max(3));
        let t = linear(rng, vars, budget, &mut fresh);
        if t.size() <= max_size {
            return t;
        }
    }
}

/// A term using each of `vars` exactly once.
fn linear(rng: &mut GenRng, mut vars: Vec<String>, budget: usize, fresh: &mut usize) -> Term {
    let binder = |fresh: &mut usize| {
        *fresh += 1;
        format!("x{fresh}")
    };
    if vars.len() == 1 && (budget <= 1 || rng.gen_bool(0.3)) {
        return Term::var(vars.pop().unwrap());
    }
    let lam_bias = if vars.is_empty() {
        1.0
    } else if budget <= 2 {
        0.0
    } else {
        0.4
    };
    if rng.gen_bool(lam_bias) {
        let x = binder(fresh);
        vars.push(x.clone());
        return Term::lam(x, linear(rng, vars, budget.saturating_sub(1), fresh));
    }
    // Application: split the variables between function and argument.
    vars.shuffle(rng);
    let cut = rng.gen_range(0..=vars.len());
    let right = vars.split_off(cut);
    let half = budget.saturating_sub(1) / 2;
    let fun = if rng.gen_bool(0.5) {
        // Prefer redexes: a λ in function position.
        let x = binder(fresh);
        let mut inner = vars;
        inner.push(x.clone());
        Term::lam(x, linear(rng, inner, half.saturating_sub(1), fresh))
    } else {
        linear(rng, vars, half, fresh)
    };
    Term::app(fun, linear(rng, right, half, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{check_linear, infer_type};
    use crate::subst::has_root_detour;

    #[test]
    fn proofs_are_valid_and_bounded() {
        let mut r = rng(7);
        let cfg = ProofConfig::default();
        for _ in 0..200 {
            let p = random_proof(&mut r, &cfg);
            assert!(p.logical_depth() <= 6);
            check_proof(&p).unwrap();
        }
    }

    #[test]
    fn detours_are_at_the_root() {
        let mut r = rng(8);
        for _ in 0..100 {
            let p = random_root_detour(&mut r, &ProofConfig::default());
            assert!(has_root_detour(&p), "{p}");
        }
    }

    #[test]
    fn some_detours_copy_their_argument() {
        let mut r = rng(10);
        let copied = (0..100)
            .map(|_| random_root_detour(&mut r, &ProofConfig::default()))
            .filter(
                |p| matches!(p, Proof::ImpE(f, _) if matches!(&**f, Proof::ImpI(b) if matches!(&**b, Proof::C(..)))),
            )
            .count();
        assert!(copied >= 10, "{copied}");
    }

    #[test]
    fn terms_are_linear_and_typable() {
        let mut r = rng(9);
        for _ in 0..200 {
            let t = random_linear_term(&mut r, 20);
            assert!(t.size() <= 20);
            check_linear(&t).unwrap();
            infer_type(&t).unwrap();
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = random_proof(&mut rng(3), &ProofConfig::default());
        let b = random_proof(&mut rng(3), &ProofConfig::default());
        assert_eq!(a, b);
    }
}
