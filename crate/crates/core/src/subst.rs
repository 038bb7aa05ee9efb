//! One-step normalisation of a detour at the root of a proof.
//!
//! * `andE1(andI(π1, π2))` becomes `π1` weakened by the hypotheses of `π2`,
//!   and symmetrically for `andE2` (followed by exchanges restoring the
//!   context order).
//! * `impE(impI(π1), π2)` becomes `π1` with `π2` substituted for the
//!   discharged hypothesis: axioms on it are replaced by `π2`, weakenings of
//!   it weaken the hypotheses of `π2` instead, and contractions of it
//!   contract the two copies of those hypotheses pairwise.

use crate::logic::{check_proof, Formula, Proof, ProofError};

type Tag = u32;

struct Tags(Tag);

impl Tags {
    fn fresh(&mut self) -> Tag {
        self.0 += 1;
        self.0
    }

    fn many(&mut self, n: usize) -> Vec<Tag> {
        (0..n).map(|_| self.fresh()).collect()
    }
}

/// Applies exchanges turning context order `from` into `to`.
fn reorder(mut p: Proof, from: &[Tag], to: &[Tag]) -> Proof {
    debug_assert_eq!(from.len(), to.len());
    let mut cur = from.to_vec();
    for (t, want) in to.iter().enumerate() {
        let mut j = cur.iter().position(|x| x == want).expect("same tags");
        while j > t {
            p = Proof::ex(j - 1, p);
            cur.swap(j - 1, j);
            j -= 1;
        }
    }
    p
}

fn hyps(p: &Proof) -> Vec<Formula> {
    check_proof(p).expect("subproof of a valid proof").hyps
}

/// Replaces hypothesis `k` of `p` (whose context carries `tags`) by the
/// conclusion of `arg`, whose context carries `arg_tags`. The result's
/// context is `tags` with position `k` replaced by `arg_tags`.
fn subst(p: &Proof, tags: &[Tag], k: usize, arg: &Proof, arg_tags: &[Tag], gen: &mut Tags) -> Proof {
    let arg_hyps = || hyps(arg);
    match p {
        Proof::Ax(_) => arg.clone(),
        Proof::Ex(i, q) => {
            let mut qtags = tags.to_vec();
            qtags.swap(*i, i + 1);
            let k2 = qtags.iter().position(|t| *t == tags[k]).unwrap();
            let r = subst(q, &qtags, k2, arg, arg_tags, gen);
            reorder(r, &splice(&qtags, k2, arg_tags), &splice(tags, k, arg_tags))
        }
        Proof::W(a, q) => {
            let last = tags.len() - 1;
            if k == last {
                arg_hyps().into_iter().fold((**q).clone(), |acc, h| Proof::w(h, acc))
            } else {
                Proof::w(a.clone(), subst(q, &tags[..last], k, arg, arg_tags, gen))
            }
        }
        Proof::C(i, q) => {
            let dup = gen.fresh();
            let mut qtags = tags.to_vec();
            qtags.insert(i + 1, dup);
            if k == *i {
                // Substitute both copies, then merge the two copies of the
                // argument's context pairwise, first copy kept.
                let copy_tags = gen.many(arg_tags.len());
                let r1 = subst(q, &qtags, i + 1, arg, &copy_tags, gen);
                let ctx1 = splice(&qtags, i + 1, &copy_tags);
                let mut r = subst(&r1, &ctx1, *i, arg, arg_tags, gen);
                let mut ctx = splice(&ctx1, *i, arg_tags);
                for (orig, copy) in arg_tags.iter().zip(&copy_tags) {
                    let pos = ctx.iter().position(|t| t == orig).unwrap();
                    let mut target: Vec<Tag> = ctx.iter().filter(|t| *t != copy).copied().collect();
                    target.insert(pos + 1, *copy);
                    r = reorder(r, &ctx, &target);
                    r = Proof::c(pos, r);
                    target.remove(pos + 1);
                    ctx = target;
                }
                reorder(r, &ctx, &splice(tags, k, arg_tags))
            } else {
                let k2 = if k < *i { k } else { k + 1 };
                let r = subst(q, &qtags, k2, arg, arg_tags, gen);
                let ctx = splice(&qtags, k2, arg_tags);
                let pos = ctx.iter().position(|t| *t == tags[*i]).unwrap();
                let r = Proof::c(pos, r);
                let mut after = ctx;
                after.remove(pos + 1);
                reorder(r, &after, &splice(tags, k, arg_tags))
            }
        }
        Proof::AndI(q1, q2) | Proof::ImpE(q1, q2) => {
            let n1 = hyps(q1).len();
            let (r1, r2) = if k < n1 {
                (subst(q1, &tags[..n1], k, arg, arg_tags, gen), (**q2).clone())
            } else {
                ((**q1).clone(), subst(q2, &tags[n1..], k - n1, arg, arg_tags, gen))
            };
            match p {
                Proof::AndI(..) => Proof::and_i(r1, r2),
                _ => Proof::imp_e(r1, r2),
            }
        }
        Proof::AndE1(q) => Proof::and_e1(subst(q, tags, k, arg, arg_tags, gen)),
        Proof::AndE2(q) => Proof::and_e2(subst(q, tags, k, arg, arg_tags, gen)),
        Proof::ImpI(q) => {
            let mut qtags = tags.to_vec();
            qtags.push(gen.fresh());
            Proof::imp_i(subst(q, &qtags, k, arg, arg_tags, gen))
        }
    }
}

fn splice(tags: &[Tag], k: usize, with: &[Tag]) -> Vec<Tag> {
    let mut out = tags[..k].to_vec();
    out.extend_from_slice(with);
    out.extend_from_slice(&tags[k + 1..]);
    out
}

/// Whether the last rule eliminates a connective introduced right above.
pub fn has_root_detour(p: &Proof) -> bool {
    matches!(
        p,
        Proof::AndE1(q) | Proof::AndE2(q) if matches!(**q, Proof::AndI(..))
    ) || matches!(p, Proof::ImpE(q, _) if matches!(**q, Proof::ImpI(_)))
}

/// Removes the detour at the root. Returns `Ok(None)` when the root is not
/// a detour; the result proves the same sequent.
pub fn normalise_root(p: &Proof) -> Result<Option<Proof>, ProofError> {
    check_proof(p)?;
    let mut gen = Tags(0);
    Ok(match p {
        Proof::AndE1(q) | Proof::AndE2(q) => {
            let Proof::AndI(p1, p2) = &**q else { return Ok(None) };
            let (h1, h2) = (hyps(p1), hyps(p2));
            if matches!(p, Proof::AndE1(_)) {
                Some(h2.into_iter().fold((**p1).clone(), |acc, h| Proof::w(h, acc)))
            } else {
                let weakened = h1.iter().cloned().fold((**p2).clone(), |acc, h| Proof::w(h, acc));
                let t1 = gen.many(h1.len());
                let t2 = gen.many(h2.len());
                let from: Vec<Tag> = t2.iter().chain(&t1).copied().collect();
                let to: Vec<Tag> = t1.iter().chain(&t2).copied().collect();
                Some(reorder(weakened, &from, &to))
            }
        }
        Proof::ImpE(q, arg) => {
            let Proof::ImpI(body) = &**q else { return Ok(None) };
            let n = hyps(body).len();
            let tags = gen.many(n);
            let arg_tags = gen.many(hyps(arg).len());
            Some(subst(body, &tags, n - 1, arg, &arg_tags, &mut gen))
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_proof;

    fn norm(text: &str) -> Proof {
        let p = parse_proof(text).unwrap();
        let q = normalise_root(&p).unwrap().expect("detour");
        assert_eq!(check_proof(&q).unwrap(), check_proof(&p).unwrap(), "{text} -> {q}");
        q
    }

    #[test]
    fn conjunction_detours() {
        assert_eq!(norm("andE1(andI(ax(A), ax(B)))").to_string(), "w(B, ax(A))");
        assert_eq!(norm("andE2(andI(ax(A), ax(B)))").to_string(), "ex(0, w(A, ax(B)))");
    }

    #[test]
    fn implication_detours() {
        assert_eq!(norm("impE(impI(ax(A)), ax(A))").to_string(), "ax(A)");
        norm("impE(impI(w(A, ax(B))), andE1(ax(A & C)))");
        norm("impE(impI(c(0, andI(ax(A), ax(A)))), impE(ax(B -> A), ax(B)))");
        norm("impE(impI(c(1, andI(ax(C), andI(ax(A), ax(A))))), impE(ax(B -> A), ax(B)))");
        norm("impE(impI(ex(0, andI(ax(A), ax(B)))), andE1(andI(ax(A), ax(C))))");
        norm("impE(impI(impI(andI(ax(A), ax(B)))), ax(A))");
        norm("impE(impI(impI(ex(0, andI(ax(A), ax(B))))), ax(B))");
    }

    #[test]
    fn non_detours() {
        assert!(normalise_root(&parse_proof("andE1(ax(A & B))").unwrap()).unwrap().is_none());
        assert!(!has_root_detour(&parse_proof("impI(ax(A))").unwrap()));
        assert!(has_root_detour(&parse_proof("impE(impI(ax(A)), ax(A))").unwrap()));
    }
}
