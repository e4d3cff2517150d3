//! Crossingless tangle diagrams in a disk.
//!
//! A braid-like tangle on `n` strands has `2n` boundary points: `0..n` along
//! the bottom and `n..2n` along the top, both numbered left to right.

/// Perfect matching of boundary points plus a number of closed circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    pair: Vec<u16>,
    circles: usize,
}

/// Result of gluing two diagrams: where each new closed circle came from.
#[derive(Debug, Clone)]
pub struct Glued {
    pub diagram: Diagram,
    /// One glued point on each circle created by the gluing.
    pub new_circles: Vec<usize>,
}

impl Diagram {
    pub fn from_pairs(pair: Vec<u16>, circles: usize) -> Self {
        debug_assert!(pair.iter().enumerate().all(|(p, &q)| pair[q as usize] as usize == p && q as usize != p));
        Self { pair, circles }
    }

    /// Vertical strands.
    pub fn identity(strands: usize) -> Self {
        let n = strands as u16;
        let pair = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self { pair, circles: 0 }
    }

    /// Vertical strands except a cap joining bottom `p, p+1` and a cup
    /// joining top `p, p+1`.
    pub fn cup_cap(strands: usize, p: usize) -> Self {
        let mut d = Self::identity(strands);
        let (a, b) = (p as u16, p as u16 + 1);
        let n = strands as u16;
        d.pair[a as usize] = b;
        d.pair[b as usize] = a;
        d.pair[(n + a) as usize] = n + b;
        d.pair[(n + b) as usize] = n + a;
        d
    }

    pub fn points(&self) -> usize {
        self.pair.len()
    }

    pub fn strands(&self) -> usize {
        self.pair.len() / 2
    }

    pub fn partner(&self, p: usize) -> usize {
        self.pair[p] as usize
    }

    pub fn circles(&self) -> usize {
        self.circles
    }

    pub fn with_circles(&self, circles: usize) -> Self {
        Self {
            pair: self.pair.clone(),
            circles,
        }
    }

    /// Places `above` on top of `self`. Circles keep their order: those of
    /// `self`, then those of `above`, then the new ones.
    pub fn stack(&self, above: &Diagram) -> Glued {
        let n = self.strands();
        debug_assert_eq!(n, above.strands());
        let mut pair = vec![0u16; 2 * n];
        let mut seen = vec![false; n];
        // walk from an outer point until the path leaves through another one
        let walk = |start_below: bool, p: usize, seen: &mut Vec<bool>| -> usize {
            let (mut below, mut p) = (start_below, p);
            loop {
                if below {
                    let q = self.partner(p);
                    if q < n {
                        return q;
                    }
                    seen[q - n] = true;
                    below = false;
                    p = q - n;
                } else {
                    let q = above.partner(p);
                    if q >= n {
                        return q;
                    }
                    seen[q] = true;
                    below = true;
                    p = n + q;
                }
            }
        };
        for p in 0..n {
            pair[p] = walk(true, p, &mut seen) as u16;
        }
        for p in n..2 * n {
            pair[p] = walk(false, p, &mut seen) as u16;
        }
        let mut new_circles = Vec::new();
        for m in 0..n {
            if seen[m] {
                continue;
            }
            new_circles.push(m);
            let mut cur = m;
            loop {
                seen[cur] = true;
                let up = above.partner(cur);
                seen[up] = true;
                cur = self.partner(n + up) - n;
                if cur == m {
                    break;
                }
            }
        }
        let circles = self.circles + above.circles + new_circles.len();
        Glued {
            diagram: Diagram { pair, circles },
            new_circles,
        }
    }

    /// Joins top point `n + k` to bottom point `k` around the outside, as
    /// in a braid closure. The new circles follow the existing ones.
    pub fn closure(&self) -> Glued {
        let n = self.strands();
        let mut seen = vec![false; 2 * n];
        let mut new_circles = Vec::new();
        for p in 0..2 * n {
            if seen[p] {
                continue;
            }
            new_circles.push(p);
            let mut cur = p;
            loop {
                seen[cur] = true;
                let q = self.partner(cur);
                seen[q] = true;
                cur = if q < n { q + n } else { q - n };
                if cur == p {
                    break;
                }
            }
        }
        let circles = self.circles + new_circles.len();
        Glued {
            diagram: Diagram { pair: Vec::new(), circles },
            new_circles,
        }
    }
}

/// Loops formed by two matchings of the same points, numbered by their
/// smallest point. Returns the loop of each point and the loop count.
pub fn loops(a: &Diagram, b: &Diagram) -> (Vec<usize>, usize) {
    debug_assert_eq!(a.points(), b.points());
    let mut of = vec![usize::MAX; a.points()];
    let mut count = 0;
    for p in 0..a.points() {
        if of[p] != usize::MAX {
            continue;
        }
        let mut cur = p;
        loop {
            of[cur] = count;
            let q = a.partner(cur);
            of[q] = count;
            cur = b.partner(q);
            if cur == p {
                break;
            }
        }
        count += 1;
    }
    (of, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cup_cap_squared_has_a_circle() {
        let cc = Diagram::cup_cap(3, 1);
        let g = cc.stack(&cc);
        assert_eq!(g.diagram.circles(), 1);
        assert_eq!(g.new_circles, vec![1]);
        assert_eq!(g.diagram.with_circles(0), cc);
    }

    #[test]
    fn identity_is_neutral() {
        let cc = Diagram::cup_cap(4, 2);
        let id = Diagram::identity(4);
        assert_eq!(id.stack(&cc).diagram, cc);
        assert_eq!(cc.stack(&id).diagram, cc);
        assert!(id.stack(&id).new_circles.is_empty());
    }

    #[test]
    fn adjacent_cup_caps() {
        // cap at 0 below a cup-cap at 1: the strand zigzags, no circle
        let g = Diagram::cup_cap(3, 0).stack(&Diagram::cup_cap(3, 1));
        assert_eq!(g.diagram.circles(), 0);
        assert_eq!(g.diagram.partner(0), 1);
        assert_eq!(g.diagram.partner(2), 3);
        assert_eq!(g.diagram.partner(4), 5);
    }

    #[test]
    fn closures() {
        assert_eq!(Diagram::identity(3).closure().diagram.circles(), 3);
        assert_eq!(Diagram::cup_cap(3, 0).closure().diagram.circles(), 2);
    }

    #[test]
    fn loop_counts() {
        let id = Diagram::identity(3);
        let cc = Diagram::cup_cap(3, 1);
        assert_eq!(loops(&id, &id).1, 3);
        let (of, count) = loops(&id, &cc);
        assert_eq!(count, 2);
        assert_eq!(of[1], of[5]);
        assert_eq!(of[0], 0);
    }
}
