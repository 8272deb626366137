//! Discrete signed excursions.
//!
//! A ±1 Dyck path stands in for the Brownian excursion and its valleys (strict
//! interior local minima) carry the i.i.d. signs. Positions are lattice
//! indices `0..=2N`; a fragment is a maximal index range on which the path
//! stays strictly above some height, and its length is counted in steps, so
//! the whole excursion has length `2N`.

use rand::seq::index;
use rand::Rng;

use crate::error::{check_probability, Error, Result};
use crate::signed_trees::{Node, NodeId, Permutation, Sign, SignedBinaryTree};

/// Largest supported half-length.
pub const MAX_HALF_LENGTH: usize = 1 << 29;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteExcursion {
    heights: Vec<i32>,
    signs: Vec<Option<Sign>>,
}

/// Checks the excursion invariants and returns the half-length `N`.
pub fn validate_heights(heights: &[i32]) -> Result<usize> {
    let len = heights.len();
    if len < 3 || len.is_multiple_of(2) {
        return Err(Error::Structure(format!("{len} heights cannot form an excursion")));
    }
    if heights[0] != 0 || heights[len - 1] != 0 {
        return Err(Error::Structure("excursion must start and end at 0".into()));
    }
    if let Some(k) = (1..len - 1).find(|&k| heights[k] <= 0) {
        return Err(Error::Structure(format!("height {} at interior index {k}", heights[k])));
    }
    if let Some(k) = heights.windows(2).position(|w| (w[1] - w[0]).abs() != 1) {
        return Err(Error::Structure(format!("step {k} is not ±1")));
    }
    Ok((len - 1) / 2)
}

#[inline]
fn is_valley(heights: &[i32], k: usize) -> bool {
    k > 0 && k + 1 < heights.len() && heights[k - 1] > heights[k] && heights[k] < heights[k + 1]
}

impl DiscreteExcursion {
    /// `signs[k]` must be `Some` exactly at the valleys.
    pub fn new(heights: Vec<i32>, signs: Vec<Option<Sign>>) -> Result<Self> {
        validate_heights(&heights)?;
        if signs.len() != heights.len() {
            return Err(Error::Structure("one sign slot per height required".into()));
        }
        for (k, s) in signs.iter().enumerate() {
            if s.is_some() != is_valley(&heights, k) {
                return Err(Error::Structure(format!("sign slot {k} disagrees with the valley set")));
            }
        }
        Ok(DiscreteExcursion { heights, signs })
    }

    /// Signs every valley `k` with `sign_of(k)`.
    pub fn with_signs(heights: Vec<i32>, mut sign_of: impl FnMut(usize) -> Sign) -> Result<Self> {
        validate_heights(&heights)?;
        let signs = (0..heights.len())
            .map(|k| is_valley(&heights, k).then(|| sign_of(k)))
            .collect();
        Ok(DiscreteExcursion { heights, signs })
    }

    fn signed_unchecked<R: Rng + ?Sized>(heights: Vec<i32>, p: f64, rng: &mut R) -> Self {
        let mut signs = vec![None; heights.len()];
        for (k, w) in heights.windows(3).enumerate() {
            if w[0] > w[1] && w[1] < w[2] {
                signs[k + 1] = Some(if rng.random_bool(p) { Sign::Plus } else { Sign::Minus });
            }
        }
        DiscreteExcursion { heights, signs }
    }

    pub fn heights(&self) -> &[i32] {
        &self.heights
    }

    pub fn signs(&self) -> &[Option<Sign>] {
        &self.signs
    }

    pub fn half_length(&self) -> usize {
        (self.heights.len() - 1) / 2
    }

    /// Total length `2N`.
    pub fn len(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sign_at(&self, k: usize) -> Option<Sign> {
        self.signs.get(k).copied().flatten()
    }

    pub fn valleys(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs.iter().enumerate().filter_map(|(k, s)| s.map(|_| k))
    }
}

/// `BYTE_PREFIX[b][j]`: height after the first `j + 1` steps encoded by the
/// bits of `b`, least significant first, `1` for up.
const BYTE_PREFIX: [[i8; 8]; 256] = {
    let mut table = [[0i8; 8]; 256];
    let mut b = 0;
    while b < 256 {
        let mut h = 0i8;
        let mut j = 0;
        while j < 8 {
            h += if (b >> j) & 1 == 1 { 1 } else { -1 };
            table[b][j] = h;
            j += 1;
        }
        b += 1;
    }
    table
};

/// Lowest entry of each `BYTE_PREFIX` row and its first position.
const BYTE_MIN: [(i8, u8); 256] = {
    let mut table = [(0i8, 0u8); 256];
    let mut b = 0;
    while b < 256 {
        let mut j = 1;
        let mut best = (BYTE_PREFIX[b][0], 0u8);
        while j < 8 {
            if BYTE_PREFIX[b][j] < best.0 {
                best = (BYTE_PREFIX[b][j], j as u8);
            }
            j += 1;
        }
        table[b] = best;
        b += 1;
    }
    table
};

/// Uniform strictly positive excursion of length `2N` (equivalently a
/// uniform Dyck path of length `2N - 2` lifted by one).
///
/// The inner Dyck path comes from the cycle lemma: a uniform arrangement of
/// `N - 1` up steps and `N` down steps has exactly one rotation whose
/// partial sums stay nonnegative until the final step, namely the one
/// starting right after the first time the minimum is reached.
pub fn sample_excursion<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<i32>> {
    if n == 0 {
        return Err(Error::param("N", "half-length must be positive"));
    }
    if n > MAX_HALF_LENGTH {
        return Err(Error::SizeCap {
            size: n,
            cap: MAX_HALF_LENGTH,
        });
    }
    let ups_wanted = n - 1;
    let steps = 2 * n - 1;
    let words = steps.div_ceil(64);
    let mut bits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
    if !steps.is_multiple_of(64) {
        bits[words - 1] &= (1u64 << (steps % 64)) - 1;
    }
    // i.i.d. bits, then flip uniformly chosen steps of the surplus kind; the
    // result is exchangeable with a fixed count, hence uniform
    let mut ups: usize = bits.iter().map(|w| w.count_ones() as usize).sum();
    while ups != ups_wanted {
        let k = rng.random_range(0..steps);
        let (w, b) = (k / 64, 1u64 << (k % 64));
        let is_up = bits[w] & b != 0;
        if ups > ups_wanted && is_up {
            bits[w] &= !b;
            ups -= 1;
        } else if ups < ups_wanted && !is_up {
            bits[w] |= b;
            ups += 1;
        }
    }
    let step = |k: usize| ((bits[k / 64] >> (k % 64)) & 1) as i32 * 2 - 1;
    let byte = |i: usize| (bits[i / 8] >> (8 * (i % 8))) as u8 as usize;
    let mut s = 0i32;
    let mut min = i32::MAX;
    let mut argmin = 0;
    for i in 0..steps / 8 {
        let b = byte(i);
        let (low, at) = BYTE_MIN[b];
        if s + i32::from(low) < min {
            min = s + i32::from(low);
            argmin = 8 * i + at as usize;
        }
        s += i32::from(BYTE_PREFIX[b][7]);
    }
    for k in 8 * (steps / 8)..steps {
        s += step(k);
        if s < min {
            min = s;
            argmin = k;
        }
    }
    // heights after each step in `from..to`, starting from `h`
    let walk = |out: &mut Vec<i32>, from: usize, to: usize, mut h: i32| {
        let mut k = from;
        while k < to && !k.is_multiple_of(8) {
            h += step(k);
            out.push(h);
            k += 1;
        }
        while k + 8 <= to {
            let row = &BYTE_PREFIX[byte(k / 8)];
            out.extend(row.iter().map(|&d| h + i32::from(d)));
            h += i32::from(row[7]);
            k += 8;
        }
        while k < to {
            h += step(k);
            out.push(h);
            k += 1;
        }
        h
    };
    // the rotation starts right after argmin and drops its final step
    let mut heights = Vec::with_capacity(2 * n + 1);
    heights.extend_from_slice(&[0, 1]);
    let h = walk(&mut heights, argmin + 1, steps, 1);
    walk(&mut heights, 0, argmin, h);
    heights.push(0);
    Ok(heights)
}

/// Gives each valley an independent sign, `Plus` with probability `p`.
pub fn assign_signs<R: Rng + ?Sized>(heights: Vec<i32>, p: f64, rng: &mut R) -> Result<DiscreteExcursion> {
    check_probability(p)?;
    validate_heights(&heights)?;
    Ok(DiscreteExcursion::signed_unchecked(heights, p, rng))
}

/// Signed excursion of half-length `n`: [`sample_excursion`] then [`assign_signs`].
pub fn sample_signed_excursion<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<DiscreteExcursion> {
    check_probability(p)?;
    let heights = sample_excursion(n, rng)?;
    Ok(DiscreteExcursion::signed_unchecked(heights, p, rng))
}

/// `count` distinct uniform interior positions in increasing order.
pub fn sample_points<R: Rng + ?Sized>(exc: &DiscreteExcursion, count: usize, rng: &mut R) -> Result<Vec<usize>> {
    let interior = exc.len() - 1;
    if count > interior {
        return Err(Error::param(
            "points",
            format!("{count} distinct positions requested from {interior}"),
        ));
    }
    let mut points: Vec<usize> = index::sample(rng, interior, count).into_iter().map(|k| k + 1).collect();
    points.sort_unstable();
    Ok(points)
}

fn check_points(len: usize, points: &[usize]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::param("points", "need at least one point"));
    }
    if points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("points", "must be strictly increasing"));
    }
    if points[0] == 0 || *points.last().unwrap() >= len {
        return Err(Error::param("points", "must lie strictly inside the excursion"));
    }
    Ok(())
}

/// Where the minimum separating two consecutive sample points lies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    /// A valley strictly between the two points.
    Valley(usize),
    /// The path between gap `g`'s two points is lowest at one of the points
    /// itself. The separating minimum is then finer than the lattice and
    /// gets a sign of its own.
    AtPoint(usize),
}

/// The signed binary tree seen by the sample `points`: consecutive points are
/// separated by the leftmost minimum of the path between them, and those
/// minima nest into a tree (leftmost wins ties). Valleys carry their stored
/// sign; a minimum sitting on a sample point draws `Plus` with probability
/// `p` from `rng`.
pub fn cartesian_tree<R: Rng + ?Sized>(
    exc: &DiscreteExcursion,
    points: &[usize],
    p: f64,
    rng: &mut R,
) -> Result<SignedBinaryTree> {
    check_probability(p)?;
    cartesian_tree_with(exc.heights(), points, |split| match split {
        Split::Valley(m) => exc.sign_at(m).expect("valley"),
        Split::AtPoint(_) => random_sign(p, rng),
    })
}

fn random_sign<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Sign {
    if rng.random_bool(p) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// [`cartesian_tree`] on unsigned heights; `sign_of` is asked once per gap.
/// Distinct gaps never share a valley.
pub fn cartesian_tree_with(
    heights: &[i32],
    points: &[usize],
    mut sign_of: impl FnMut(Split) -> Sign,
) -> Result<SignedBinaryTree> {
    let len = heights.len().saturating_sub(1);
    if len < 2 || heights[0] != 0 || heights[len] != 0 {
        return Err(Error::Structure("heights do not form an excursion".into()));
    }
    check_points(len, points)?;
    let e = heights;
    let gaps = points.len() - 1;
    if gaps == 0 {
        return Ok(SignedBinaryTree::leaf());
    }
    let mut gap_at = Vec::with_capacity(gaps);
    for w in points.windows(2) {
        let span = &e[w[0]..=w[1]];
        let low = *span.iter().min().expect("nonempty");
        gap_at.push(w[0] + span.iter().position(|&x| x == low).expect("present"));
    }
    let gap_height = |g: usize| e[gap_at[g]];

    let mut left = vec![NONE; gaps];
    let mut right = vec![NONE; gaps];
    let mut stack: Vec<u32> = Vec::with_capacity(64);
    for (g, slot) in left.iter_mut().enumerate() {
        let mut last = NONE;
        while let Some(&top) = stack.last() {
            if gap_height(top as usize) > gap_height(g) {
                last = stack.pop().unwrap();
            } else {
                break;
            }
        }
        *slot = last;
        if let Some(&top) = stack.last() {
            right[top as usize] = g as u32;
        }
        stack.push(g as u32);
    }
    let root = stack[0];

    // preorder emission; gap g has point g to its left and point g + 1 to its right
    enum Item {
        Gap(u32),
        Leaf(u32),
    }
    let mut nodes = Vec::with_capacity(2 * gaps + 1);
    let mut todo = vec![(Item::Gap(root), NONE)];
    while let Some((item, owner)) = todo.pop() {
        let id = nodes.len() as u32;
        if owner != NONE {
            if let Node::Internal { right, .. } = &mut nodes[owner as usize] {
                *right = NodeId(id);
            }
        }
        match item {
            Item::Leaf(point) => nodes.push(Node::Leaf { rank: point + 1 }),
            Item::Gap(g) => {
                let gi = g as usize;
                let m = gap_at[gi];
                let split = if m > points[gi] && m < points[gi + 1] {
                    debug_assert!(is_valley(e, m));
                    Split::Valley(m)
                } else {
                    Split::AtPoint(gi)
                };
                let sign = sign_of(split);
                nodes.push(Node::Internal {
                    left: NodeId(id + 1),
                    right: NodeId(NONE),
                    sign,
                });
                let r = if right[gi] == NONE {
                    Item::Leaf(g + 1)
                } else {
                    Item::Gap(right[gi])
                };
                let l = if left[gi] == NONE {
                    Item::Leaf(g)
                } else {
                    Item::Gap(left[gi])
                };
                todo.push((r, id));
                todo.push((l, NONE));
            }
        }
    }
    Ok(SignedBinaryTree::from_preorder_unchecked(nodes))
}

/// The permutation of the sample `points`: `σ(i) < σ(j)` iff the minimum
/// separating points `i < j` is `Plus`.
pub fn perm_from_points<R: Rng + ?Sized>(
    exc: &DiscreteExcursion,
    points: &[usize],
    p: f64,
    rng: &mut R,
) -> Result<Permutation> {
    Ok(crate::signed_trees::to_permutation(&cartesian_tree(
        exc, points, p, rng,
    )?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

/// One change of the fragment containing the tagged position.
///
/// Lengths are those of the piecewise-linear path: the fragment at height
/// `h` is the open interval around `t` where the path exceeds `h`, and its
/// endpoints are lattice indices whenever `h` is an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FragmentEvent {
    /// Height at which the fragment changes.
    pub height: i32,
    /// Length of the fragment just before the event.
    pub parent_len: u32,
    /// Length of the part that still contains `t`.
    pub kept_len: u32,
    /// Length of the part split off on the other side; for an event that
    /// only trims the two ends this is the trimmed length.
    pub other_len: u32,
    /// Endpoints of the kept part.
    pub kept: (u32, u32),
    pub side: Side,
    /// Sign of the split; `None` when the fragment only loses its ends.
    pub sign: Option<Sign>,
}

impl FragmentEvent {
    pub fn is_branching(&self) -> bool {
        self.sign.is_some()
    }

    /// Whether the selection rule throws the tagged fragment away here:
    /// a `Minus` split where the other part is at least as long.
    pub fn kills(&self) -> bool {
        self.sign == Some(Sign::Minus) && self.other_len >= self.kept_len
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FragmentTrace {
    pub t: usize,
    /// Length `2N` of the whole excursion.
    pub total_len: u32,
    /// Events in increasing height.
    pub events: Vec<FragmentEvent>,
}

impl FragmentTrace {
    /// Length of the fragment containing `t` at integer height `h`; zero
    /// once `h` reaches the height of `t`.
    pub fn len_at(&self, h: i32, height_of_t: i32) -> u32 {
        if h >= height_of_t {
            return 0;
        }
        self.events
            .iter()
            .take_while(|ev| ev.height <= h)
            .last()
            .map_or(self.total_len, |ev| ev.kept_len)
    }

    /// Fragment length as a fraction of the whole excursion.
    pub fn fraction_at(&self, h: i32, height_of_t: i32) -> f64 {
        self.len_at(h, height_of_t) as f64 / self.total_len as f64
    }

    pub fn branching_events(&self) -> impl Iterator<Item = &FragmentEvent> {
        self.events.iter().filter(|ev| ev.is_branching())
    }
}

/// Cartesian tree of the whole path over the interior indices `1..2N`,
/// leftmost minimum on ties. Node `m` stands for the fragment `lo[m]..=hi[m]`
/// that splits at height `e[m]`.
pub struct ExcursionTree<'a> {
    exc: &'a DiscreteExcursion,
    parent: Vec<u32>,
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl<'a> ExcursionTree<'a> {
    pub fn new(exc: &'a DiscreteExcursion) -> Self {
        let e = exc.heights();
        let last = exc.len() - 1;
        let size = exc.len() + 1;
        let mut parent = vec![NONE; size];
        let mut lo = vec![0u32; size];
        let mut hi = vec![0u32; size];
        let mut stack: Vec<u32> = Vec::with_capacity(1024);
        for i in 1..=last {
            let mut popped = NONE;
            while let Some(&top) = stack.last() {
                if e[top as usize] > e[i] {
                    stack.pop();
                    hi[top as usize] = (i - 1) as u32;
                    popped = top;
                } else {
                    break;
                }
            }
            if popped != NONE {
                parent[popped as usize] = i as u32;
            }
            match stack.last() {
                Some(&top) => {
                    lo[i] = top + 1;
                    parent[i] = top;
                }
                None => lo[i] = 1,
            }
            stack.push(i as u32);
        }
        for &s in &stack {
            hi[s as usize] = last as u32;
        }
        ExcursionTree { exc, parent, lo, hi }
    }

    pub fn excursion(&self) -> &DiscreteExcursion {
        self.exc
    }

    pub fn root(&self) -> usize {
        let mut m = 1;
        while self.parent[m] != NONE {
            m = self.parent[m] as usize;
        }
        m
    }

    /// Inclusive index range of the fragment split at node `m`.
    pub fn range(&self, m: usize) -> (usize, usize) {
        (self.lo[m] as usize, self.hi[m] as usize)
    }

    pub fn parent(&self, m: usize) -> Option<usize> {
        let p = self.parent[m];
        (p != NONE).then_some(p as usize)
    }

    fn check_t(&self, t: usize) -> Result<()> {
        if t == 0 || t >= self.exc.len() {
            return Err(Error::param("t", format!("{t} is not an interior position")));
        }
        Ok(())
    }

    /// The event node `m` causes on the way down to `t`, if any.
    ///
    /// All lattice points at one height `v` inside a fragment are removed
    /// together; the tree meets them left to right. The first one (`m` at
    /// the start of its range) trims both ends of the fragment, each
    /// following one splits the rest in two, and the last one changes
    /// nothing.
    fn event(&self, m: usize, t: usize) -> Option<FragmentEvent> {
        split_event(self.exc.heights(), m, self.lo[m], self.hi[m], t, |m| {
            self.exc.sign_at(m)
        })
    }

    /// Every change of the fragment containing `t`, from the whole excursion
    /// down to the moment `t` itself is reached.
    pub fn fragment_trace(&self, t: usize) -> Result<FragmentTrace> {
        self.check_t(t)?;
        let mut events = Vec::new();
        let mut m = self.parent[t];
        while m != NONE {
            events.extend(self.event(m as usize, t));
            m = self.parent[m as usize];
        }
        events.reverse();
        Ok(FragmentTrace {
            t,
            total_len: self.exc.len() as u32,
            events,
        })
    }

    /// Whether the fragment containing `t` shrinks to at most `eps` of the
    /// excursion before the selection rule throws it away. A killing split
    /// is harmless exactly when the fragment was already that small just
    /// before it.
    pub fn survives_to_eps(&self, t: usize, eps: f64) -> Result<bool> {
        check_eps(eps)?;
        Ok(self.survives_given(self.kill_length(t)?, eps))
    }

    /// Length of the largest fragment around `t` that a killing split cuts,
    /// zero when none does. Survival to `eps` depends on `t` only through
    /// this number, see [`ExcursionTree::survives_given`].
    pub fn kill_length(&self, t: usize) -> Result<u32> {
        self.check_t(t)?;
        let mut worst = 0u32;
        let mut m = self.parent[t];
        while m != NONE {
            if let Some(ev) = self.event(m as usize, t) {
                if ev.kills() {
                    worst = worst.max(ev.parent_len);
                }
            }
            m = self.parent[m as usize];
        }
        Ok(worst)
    }

    pub fn survives_given(&self, kill_length: u32, eps: f64) -> bool {
        !(kill_length as f64 > eps * self.exc.len() as f64)
    }

    pub fn two_point_survival(&self, t1: usize, t2: usize, eps: f64) -> Result<(bool, bool)> {
        if t1 == t2 {
            return Err(Error::param("t2", "tagged positions must differ"));
        }
        Ok((self.survives_to_eps(t1, eps)?, self.survives_to_eps(t2, eps)?))
    }
}

/// The change that node `m` with fragment range `a..=b` makes to the
/// fragment containing `t`; `None` when `m` closes the fragment on the right.
/// `sign_of` is asked only for splits, which sit at valleys.
fn split_event(
    heights: &[i32],
    m: usize,
    a: u32,
    b: u32,
    t: usize,
    sign_of: impl FnOnce(usize) -> Option<Sign>,
) -> Option<FragmentEvent> {
    let m32 = m as u32;
    let t32 = t as u32;
    let side = if t32 < m32 { Side::Left } else { Side::Right };
    let (parent_len, kept_len, other_len, kept, sign) = if a == m32 {
        (b - a + 2, b - a, 2, (a, b), None)
    } else if b == m32 {
        return None;
    } else if t32 < m32 {
        (b - a + 1, m32 - a + 1, b - m32, (a - 1, m32), sign_of(m))
    } else {
        (b - a + 1, b - m32, m32 - a + 1, (m32, b), sign_of(m))
    };
    Some(FragmentEvent {
        height: heights[m],
        parent_len,
        kept_len,
        other_len,
        kept,
        side,
        sign,
    })
}

/// Same value as [`ExcursionTree::kill_length`] without building the tree:
/// the ancestors of `t` are found by widening a window around `t`, which
/// reads each height at most once.
pub fn kill_length(exc: &DiscreteExcursion, t: usize) -> Result<u32> {
    kill_length_with(exc.heights(), t, |m| exc.sign_at(m).expect("splits sit at valleys"))
}

/// [`kill_length`] on unsigned heights, asking `sign_of` for the sign of
/// each valley on the way up from `t` (each at most once per call). Feeding
/// fresh independent signs gives the law of a fully signed excursion at the
/// cost of a few hundred draws instead of one per valley.
pub fn kill_length_with(heights: &[i32], t: usize, mut sign_of: impl FnMut(usize) -> Sign) -> Result<u32> {
    let len = heights.len().saturating_sub(1);
    if len < 2 || heights[0] != 0 || heights[len] != 0 {
        return Err(Error::Structure("heights do not form an excursion".into()));
    }
    let last = len - 1;
    if t == 0 || t > last {
        return Err(Error::param("t", format!("{t} is not an interior position 1..={last}")));
    }
    // heights[0] and heights[len] are 0 and stop every scan
    let e = heights;
    let mut a = t;
    let mut b = t;
    while e[a - 1] > e[t] {
        a -= 1;
    }
    while e[b + 1] >= e[t] {
        b += 1;
    }
    let mut worst = 0u32;
    loop {
        let (left, right) = (a - 1, b + 1);
        let m = match (left >= 1, right <= last) {
            (false, false) => break,
            (true, false) => left,
            (false, true) => right,
            (true, true) => {
                if e[left] > e[right] {
                    left
                } else {
                    right
                }
            }
        };
        if m == left {
            a = left;
            while e[a - 1] > e[m] {
                a -= 1;
            }
        } else {
            b = right;
            while e[b + 1] >= e[m] {
                b += 1;
            }
        }
        if let Some(ev) = split_event(e, m, a as u32, b as u32, t, |m| Some(sign_of(m))) {
            if ev.kills() {
                worst = worst.max(ev.parent_len);
            }
        }
    }
    Ok(worst)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param("eps", format!("{eps} is outside (0, 1]")));
    }
    Ok(())
}

pub fn fragment_trace(exc: &DiscreteExcursion, t: usize) -> Result<FragmentTrace> {
    ExcursionTree::new(exc).fragment_trace(t)
}

pub fn survives_to_eps(exc: &DiscreteExcursion, t: usize, eps: f64) -> Result<bool> {
    check_eps(eps)?;
    ExcursionTree::new(exc).survives_to_eps(t, eps)
}

pub fn two_point_survival(exc: &DiscreteExcursion, t1: usize, t2: usize, eps: f64) -> Result<(bool, bool)> {
    check_eps(eps)?;
    ExcursionTree::new(exc).two_point_survival(t1, t2, eps)
}
