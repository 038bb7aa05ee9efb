use std::collections::BTreeMap;

use super::Endpoint;

/// A wire end during construction: a real endpoint, or one side of a
/// joint. Joints are pass-through points that disappear on resolution; they
/// model bare wires (axioms, variables) and the splice points of a rewrite.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum End {
    Real(Endpoint),
    Joint(u32, bool),
}

#[derive(Default, Debug)]
pub(crate) struct Wiring {
    map: BTreeMap<End, End>,
    joints: u32,
}

impl Wiring {
    /// A fresh bare wire; returns its two sides.
    pub fn joint(&mut self) -> (End, End) {
        let j = self.joints;
        self.joints += 1;
        (End::Joint(j, false), End::Joint(j, true))
    }

    /// Whether the end is already wired.
    pub fn has(&self, e: End) -> bool {
        self.map.contains_key(&e)
    }

    /// Joins two ends; on conflict returns the end that was already wired.
    pub fn connect(&mut self, a: End, b: End) -> Result<(), End> {
        for e in [a, b] {
            if self.map.contains_key(&e) {
                return Err(e);
            }
        }
        if a == b {
            return Err(a);
        }
        self.map.insert(a, b);
        self.map.insert(b, a);
        Ok(())
    }

    /// Collapses joint chains into direct wires between real endpoints.
    /// Chains made only of joints vanish. A chain that runs into an
    /// unconnected joint side is reported as an error.
    pub fn resolve(self) -> Result<Vec<(Endpoint, Endpoint)>, End> {
        let mut wires = Vec::new();
        for (from, to) in &self.map {
            let End::Real(start) = *from else { continue };
            let mut cur = *to;
            let target = loop {
                match cur {
                    End::Real(r) => break r,
                    End::Joint(j, side) => match self.map.get(&End::Joint(j, !side)) {
                        Some(next) => cur = *next,
                        None => return Err(End::Joint(j, !side)),
                    },
                }
            };
            if start <= target {
                wires.push((start, target));
            }
        }
        Ok(wires)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joint_chains_collapse() {
        let mut w = Wiring::default();
        let (a, b) = w.joint();
        let (c, d) = w.joint();
        w.connect(End::Real(Endpoint::Free(0)), a).unwrap();
        w.connect(b, c).unwrap();
        w.connect(d, End::Real(Endpoint::Free(1))).unwrap();
        let (x, y) = w.joint();
        w.connect(x, y).unwrap();
        assert_eq!(w.resolve().unwrap(), vec![(Endpoint::Free(0), Endpoint::Free(1))]);
    }

    #[test]
    fn open_joint_is_an_error() {
        let mut w = Wiring::default();
        let (a, _b) = w.joint();
        w.connect(End::Real(Endpoint::Free(0)), a).unwrap();
        assert!(w.resolve().is_err());
    }
}
