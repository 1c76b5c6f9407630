//! Layered words for oriented 2d bordisms between disjoint unions of
//! circles, and their evaluation in a commutative Frobenius algebra.
//!
//! A word is a sequence of layers read top to bottom; a layer is a
//! horizontal juxtaposition (disjoint union) of generators. Strand `0` is
//! the most significant tensor factor.
//!
//! Text form: `word := layer (";" layer)*`, `layer := gen ("|" gen)*`,
//! `gen := pants | cup | down | up | wire | swap`. Whitespace is ignored.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{Rat, RatMatrix};
use crate::frobenius::FrobeniusAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// 2 → 1, multiplication.
    Pants,
    /// 0 → 1, unit.
    Cup,
    /// 2 → 0, the pairing.
    Down,
    /// 0 → 2, the copairing.
    Up,
    Wire,
    Swap,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::Pants,
        Generator::Cup,
        Generator::Down,
        Generator::Up,
        Generator::Wire,
        Generator::Swap,
    ];

    /// `(inputs, outputs)`.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Generator::Pants => (2, 1),
            Generator::Cup => (0, 1),
            Generator::Down => (2, 0),
            Generator::Up => (0, 2),
            Generator::Wire => (1, 1),
            Generator::Swap => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Pants => "pants",
            Generator::Cup => "cup",
            Generator::Down => "down",
            Generator::Up => "up",
            Generator::Wire => "wire",
            Generator::Swap => "swap",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == name)
    }

    /// The linear map this generator is sent to, as a `d^out × d^in` matrix.
    pub fn matrix(self, a: &FrobeniusAlgebra) -> RatMatrix {
        let d = a.dim();
        match self {
            Generator::Pants => {
                let mut m = RatMatrix::zeros(d, d * d);
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            m.set(k, i * d + j, a.structure_constant(i, j, k).clone());
                        }
                    }
                }
                m
            }
            Generator::Cup => RatMatrix::new(d, 1, a.unit().to_vec()).unwrap(),
            Generator::Down => RatMatrix::new(1, d * d, a.pairing().entries().to_vec()).unwrap(),
            Generator::Up => RatMatrix::new(d * d, 1, a.copairing().entries().to_vec()).unwrap(),
            Generator::Wire => RatMatrix::identity(d),
            Generator::Swap => {
                let mut m = RatMatrix::zeros(d * d, d * d);
                for i in 0..d {
                    for j in 0..d {
                        m.set(j * d + i, i * d + j, Rat::one());
                    }
                }
                m
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    generators: Vec<Generator>,
}

impl Layer {
    pub fn new(generators: Vec<Generator>) -> Self {
        Layer { generators }
    }

    pub fn wires(n: usize) -> Self {
        Layer::new(vec![Generator::Wire; n])
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn in_arity(&self) -> usize {
        self.generators.iter().map(|g| g.arity().0).sum()
    }

    pub fn out_arity(&self) -> usize {
        self.generators.iter().map(|g| g.arity().1).sum()
    }

    /// Kronecker product of the generator matrices in strand order.
    pub fn matrix(&self, a: &FrobeniusAlgebra) -> RatMatrix {
        self.generators
            .iter()
            .fold(RatMatrix::identity(1), |acc, g| acc.kronecker(&g.matrix(a)))
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BordismError {
    #[error("syntax error at byte {position}: {reason}")]
    Syntax { position: usize, reason: String },
    /// `layer` is 1-based; `expected` is the number of circles arriving
    /// from above, `found` the in-arity of the layer.
    #[error("arity mismatch at layer {layer}: expected in-arity {expected}, found {found}")]
    ArityMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    #[error("a layer must contain at least one generator")]
    EmptyLayer,
}

/// A validated composable word of layers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BordismWord {
    layers: Vec<Layer>,
    source: usize,
    target: usize,
}

impl BordismWord {
    pub fn new(layers: Vec<Layer>) -> Result<Self, BordismError> {
        let Some(first) = layers.first() else {
            return Ok(Self::identity(0));
        };
        let source = first.in_arity();
        let mut width = source;
        for (idx, layer) in layers.iter().enumerate() {
            if layer.generators.is_empty() {
                return Err(BordismError::EmptyLayer);
            }
            if layer.in_arity() != width {
                return Err(BordismError::ArityMismatch {
                    layer: idx + 1,
                    expected: width,
                    found: layer.in_arity(),
                });
            }
            width = layer.out_arity();
        }
        Ok(BordismWord {
            layers,
            source,
            target: width,
        })
    }

    /// The identity on `n` circles: a single wire layer, or the empty word
    /// when `n = 0`.
    pub fn identity(n: usize) -> Self {
        BordismWord {
            layers: if n == 0 { vec![] } else { vec![Layer::wires(n)] },
            source: n,
            target: n,
        }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn source_circles(&self) -> usize {
        self.source
    }

    pub fn target_circles(&self) -> usize {
        self.target
    }

    pub fn is_closed(&self) -> bool {
        self.source == 0 && self.target == 0
    }

    /// Largest number of circles alive at any cut.
    pub fn max_width(&self) -> usize {
        self.layers
            .iter()
            .map(Layer::out_arity)
            .chain([self.source])
            .max()
            .unwrap_or(0)
    }

    pub fn generator_count(&self) -> usize {
        self.layers.iter().map(|l| l.generators.len()).sum()
    }

    /// `second ∘ first`: `self` runs first.
    pub fn compose(&self, second: &BordismWord) -> Result<BordismWord, BordismError> {
        if self.target != second.source {
            return Err(BordismError::ArityMismatch {
                layer: self.layers.len() + 1,
                expected: self.target,
                found: second.source,
            });
        }
        let mut layers = self.layers.clone();
        layers.extend(second.layers.iter().cloned());
        Ok(BordismWord {
            layers,
            source: self.source,
            target: second.target,
        })
    }
}

impl fmt::Display for BordismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.layers.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<BordismWord, BordismError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut layers = Vec::new();
    let mut current = Vec::new();
    let syntax = |position: usize, reason: &str| BordismError::Syntax {
        position,
        reason: reason.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
            pos += 1;
        }
        if start == pos {
            return Err(syntax(start, "expected generator name"));
        }
        let name = &text[start..pos];
        let g = Generator::from_name(name).ok_or_else(|| syntax(start, "unknown generator"))?;
        current.push(g);
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => break,
            Some(b'|') => pos += 1,
            Some(b';') => {
                layers.push(Layer::new(core::mem::take(&mut current)));
                pos += 1;
            }
            Some(_) => return Err(syntax(pos, "expected `|`, `;` or end of input")),
        }
    }
    layers.push(Layer::new(current));
    BordismWord::new(layers)
}

/// Applies a `d^out × d^in` block map to strands `[offset, offset + ins)`
/// of a state tensor of the given width.
fn apply_block(
    state: &[Rat],
    d: usize,
    width: usize,
    offset: usize,
    ins: usize,
    outs: usize,
    m: &RatMatrix,
) -> Vec<Rat> {
    let pre = d.pow(offset as u32);
    let suf = d.pow((width - offset - ins) as u32);
    let inb = d.pow(ins as u32);
    let outb = d.pow(outs as u32);
    let mut out = vec![Rat::zero(); pre * outb * suf];
    for p in 0..pre {
        for ib in 0..inb {
            for s in 0..suf {
                let v = &state[(p * inb + ib) * suf + s];
                if v.is_zero() {
                    continue;
                }
                for ob in 0..outb {
                    let g = m.get(ob, ib);
                    if !g.is_zero() {
                        out[(p * outb + ob) * suf + s] += &(g * v);
                    }
                }
            }
        }
    }
    out
}

/// Generator matrices for one algebra, computed once per evaluation.
struct Images {
    d: usize,
    mats: Vec<(Generator, RatMatrix)>,
}

impl Images {
    fn new(a: &FrobeniusAlgebra) -> Self {
        Images {
            d: a.dim(),
            mats: Generator::ALL.iter().map(|&g| (g, g.matrix(a))).collect(),
        }
    }

    fn get(&self, g: Generator) -> &RatMatrix {
        &self.mats.iter().find(|(h, _)| *h == g).unwrap().1
    }

    fn apply_layer(&self, state: Vec<Rat>, layer: &Layer) -> Vec<Rat> {
        let mut width = layer.in_arity();
        let mut offset = 0;
        let mut state = state;
        for &g in &layer.generators {
            let (ins, outs) = g.arity();
            if g != Generator::Wire {
                state = apply_block(&state, self.d, width, offset, ins, outs, self.get(g));
                width = width - ins + outs;
            }
            offset += outs;
        }
        state
    }
}

/// The linear map of `w`: a `d^target × d^source` matrix. Closed words give
/// a `1 × 1` matrix holding the partition function.
pub fn evaluate(w: &BordismWord, a: &FrobeniusAlgebra) -> RatMatrix {
    let images = Images::new(a);
    let d = a.dim();
    let cols = d.pow(w.source as u32);
    let rows = d.pow(w.target as u32);
    let mut out = RatMatrix::zeros(rows, cols);
    for c in 0..cols {
        let mut state = vec![Rat::zero(); cols];
        state[c] = Rat::one();
        for layer in &w.layers {
            state = images.apply_layer(state, layer);
        }
        for (r, v) in state.into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}

/// A fixed 0 → 0 decomposition of the closed genus-`g` surface into the
/// building blocks.
pub fn canonical_closed_surface(genus: usize) -> BordismWord {
    use Generator::*;
    let layer = |gs: &[Generator]| Layer::new(gs.to_vec());
    let layers = match genus {
        0 => vec![layer(&[Cup]), layer(&[Wire, Cup]), layer(&[Down])],
        _ => {
            let mut ls = vec![layer(&[Up])];
            // each handle multiplies the first strand by the two legs of a copairing
            for _ in 1..genus {
                ls.push(layer(&[Wire, Up, Wire]));
                ls.push(layer(&[Pants, Wire, Wire]));
                ls.push(layer(&[Pants, Wire]));
            }
            ls.push(layer(&[Down]));
            ls
        }
    };
    BordismWord::new(layers).expect("canonical surface is well formed")
}

/// One non-wire generator applied at a strand offset: the sliced form of a
/// word applies these one at a time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slice {
    gen: Generator,
    offset: usize,
}

fn to_slices(w: &BordismWord) -> Vec<Slice> {
    let mut out = Vec::new();
    for layer in &w.layers {
        let mut offset = 0;
        for &g in &layer.generators {
            if g != Generator::Wire {
                out.push(Slice { gen: g, offset });
            }
            offset += g.arity().1;
        }
    }
    out
}

fn widths(source: usize, slices: &[Slice]) -> Vec<usize> {
    let mut w = Vec::with_capacity(slices.len() + 1);
    let mut cur = source;
    w.push(cur);
    for s in slices {
        let (i, o) = s.gen.arity();
        cur = cur - i + o;
        w.push(cur);
    }
    w
}

#[derive(Clone, Copy)]
enum Choice {
    Merge,
    Pad,
}

/// Regroups slices into layers. A slice is merged into the layer above when
/// it only consumes wires of that layer (the interchange law); otherwise it
/// opens a new layer, optionally after an extra wire layer.
fn from_slices(source: usize, slices: &[Slice], mut choose: impl FnMut(Choice) -> bool) -> BordismWord {
    let mut layers: Vec<Layer> = Vec::new();
    let mut width = source;
    for s in slices {
        let (ins, outs) = s.gen.arity();
        let merged = match layers.last_mut() {
            Some(last) if choose(Choice::Merge) => try_merge(last, *s),
            _ => false,
        };
        if !merged {
            if width > 0 && choose(Choice::Pad) {
                layers.push(Layer::wires(width));
            }
            let mut gens = vec![Generator::Wire; s.offset];
            gens.push(s.gen);
            gens.extend(core::iter::repeat_n(Generator::Wire, width - s.offset - ins));
            layers.push(Layer::new(gens));
        }
        width = width - ins + outs;
    }
    if layers.is_empty() {
        return BordismWord::identity(source);
    }
    BordismWord::new(layers).expect("slices regroup into a valid word")
}

fn try_merge(layer: &mut Layer, s: Slice) -> bool {
    let (ins, _) = s.gen.arity();
    // (item index, cumulative outputs before it)
    let mut starts = Vec::with_capacity(layer.generators.len() + 1);
    let mut acc = 0;
    for g in &layer.generators {
        starts.push(acc);
        acc += g.arity().1;
    }
    starts.push(acc);
    let Some(first) = starts.iter().position(|&c| c == s.offset) else {
        return false;
    };
    if ins == 0 {
        layer.generators.insert(first, s.gen);
        return true;
    }
    let end = first + ins;
    if end > layer.generators.len() || layer.generators[first..end].iter().any(|g| *g != Generator::Wire) {
        return false;
    }
    layer.generators.splice(first..end, [s.gen]);
    true
}

/// Local rewrites, each an identity of commutative Frobenius algebras, so
/// applying one never changes the evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Insert a zig-zag (`up` then `down`) on one strand.
    Snake,
    /// Insert a unit followed by a multiplication on one strand.
    UnitInsert,
    /// `pants` → `swap ; pants`.
    Commute,
    /// `pants` → copairing, multiply into one leg, pair off.
    Frobenius,
    /// Re-bracket two stacked multiplications.
    Associate,
    /// Replace a generator by a longer equivalent word.
    Expand,
    /// Remove a redundant pattern (inverse of the insertions).
    Contract,
    /// Exchange two slices acting on disjoint strands.
    Interchange,
}

impl Move {
    pub const ALL: [Move; 8] = [
        Move::Snake,
        Move::UnitInsert,
        Move::Commute,
        Move::Frobenius,
        Move::Associate,
        Move::Expand,
        Move::Contract,
        Move::Interchange,
    ];
}

/// Limits keeping random decompositions cheap to evaluate.
const MAX_WIDTH: usize = 5;
const MAX_SLICES: usize = 48;

fn sl(gen: Generator, offset: usize) -> Slice {
    Slice { gen, offset }
}

/// All ways `mv` can fire on `slices`, as (start, removed count, replacement).
fn candidates(mv: Move, source: usize, slices: &[Slice]) -> Vec<(usize, usize, Vec<Slice>)> {
    use Generator::*;
    let ws = widths(source, slices);
    let mut out = Vec::new();
    match mv {
        Move::Snake | Move::UnitInsert => {
            for (i, &w) in ws.iter().enumerate() {
                for o in 0..w {
                    let reps: &[[Slice; 2]] = if mv == Move::Snake {
                        &[[sl(Up, o), sl(Down, o + 1)], [sl(Up, o + 1), sl(Down, o)]]
                    } else {
                        &[[sl(Cup, o + 1), sl(Pants, o)], [sl(Cup, o), sl(Pants, o)]]
                    };
                    for r in reps {
                        out.push((i, 0, r.to_vec()));
                    }
                }
            }
        }
        Move::Commute | Move::Frobenius => {
            for (i, s) in slices.iter().enumerate() {
                if s.gen != Pants {
                    continue;
                }
                let o = s.offset;
                let rep = if mv == Move::Commute {
                    vec![sl(Swap, o), sl(Pants, o)]
                } else {
                    vec![sl(Up, o), sl(Pants, o + 1), sl(Down, o + 1)]
                };
                out.push((i, 1, rep));
            }
        }
        Move::Associate => {
            for i in 0..slices.len().saturating_sub(1) {
                let (a, b) = (slices[i], slices[i + 1]);
                if a.gen != Pants || b.gen != Pants {
                    continue;
                }
                if a.offset == b.offset {
                    out.push((i, 2, vec![sl(Pants, a.offset + 1), sl(Pants, a.offset)]));
                } else if a.offset == b.offset + 1 {
                    out.push((i, 2, vec![sl(Pants, b.offset), sl(Pants, b.offset)]));
                }
            }
        }
        Move::Expand => {
            for (i, s) in slices.iter().enumerate() {
                let o = s.offset;
                let reps: Vec<Vec<Slice>> = match s.gen {
                    Pants => vec![vec![sl(Cup, o + 2), sl(Pants, o + 1), sl(Pants, o)]],
                    Cup => vec![vec![sl(Cup, o), sl(Cup, o + 1), sl(Pants, o)]],
                    Down => vec![
                        vec![sl(Swap, o), sl(Down, o)],
                        vec![sl(Pants, o), sl(Cup, o + 1), sl(Down, o)],
                    ],
                    Up => vec![vec![sl(Up, o), sl(Swap, o)]],
                    Swap => vec![vec![sl(Swap, o), sl(Swap, o), sl(Swap, o)]],
                    Wire => vec![],
                };
                for r in reps {
                    out.push((i, 1, r));
                }
            }
        }
        Move::Contract => {
            for i in 0..slices.len().saturating_sub(1) {
                let (a, b) = (slices[i], slices[i + 1]);
                let o = a.offset;
                let rep = match (a.gen, b.gen) {
                    (Swap, Swap) if b.offset == o => Some(vec![]),
                    (Swap, Pants) if b.offset == o => Some(vec![sl(Pants, o)]),
                    (Swap, Down) if b.offset == o => Some(vec![sl(Down, o)]),
                    (Up, Swap) if b.offset == o => Some(vec![sl(Up, o)]),
                    (Up, Down) if b.offset == o + 1 || b.offset + 1 == o => Some(vec![]),
                    (Cup, Pants) if b.offset == o || b.offset + 1 == o => Some(vec![]),
                    _ => None,
                };
                if let Some(r) = rep {
                    out.push((i, 2, r));
                }
            }
        }
        Move::Interchange => {
            for i in 0..slices.len().saturating_sub(1) {
                let (a, b) = (slices[i], slices[i + 1]);
                let (ia, oa) = a.gen.arity();
                let (ib, ob) = b.gen.arity();
                if b.offset + ib <= a.offset {
                    out.push((i, 2, vec![sl(b.gen, b.offset), sl(a.gen, a.offset - ib + ob)]));
                } else if b.offset >= a.offset + oa {
                    out.push((i, 2, vec![sl(b.gen, b.offset - oa + ia), sl(a.gen, a.offset)]));
                }
            }
        }
    }
    out
}

fn apply_candidate(slices: &[Slice], (start, removed, rep): &(usize, usize, Vec<Slice>)) -> Vec<Slice> {
    let mut v = slices[..*start].to_vec();
    v.extend_from_slice(rep);
    v.extend_from_slice(&slices[start + removed..]);
    v
}

fn within_limits(source: usize, slices: &[Slice]) -> bool {
    slices.len() <= MAX_SLICES && widths(source, slices).into_iter().all(|w| w <= MAX_WIDTH)
}

/// Applies the first legal instance of `mv` at or after slice `at`, if any.
/// Returns `None` when the move does not apply.
pub fn apply_move(w: &BordismWord, mv: Move, at: usize) -> Option<BordismWord> {
    let slices = to_slices(w);
    let cands = candidates(mv, w.source, &slices);
    let c = cands.iter().find(|c| c.0 >= at).or_else(|| cands.first())?;
    let next = apply_candidate(&slices, c);
    Some(from_slices(w.source, &next, |c| matches!(c, Choice::Merge)))
}

/// A word related to `w` by a seeded random sequence of sound local moves,
/// re-layered at random. The result always differs from `w` as a word.
pub fn random_equivalent_decomposition(w: &BordismWord, seed: u64) -> BordismWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = w.source;
    let mut slices = to_slices(w);
    let steps = rng.random_range(1..=6);
    let mut grew = false;
    for step in 0..steps + 8 {
        if step >= steps && grew {
            break;
        }
        let mv = Move::ALL[rng.random_range(0..Move::ALL.len())];
        let cands: Vec<_> = candidates(mv, source, &slices)
            .into_iter()
            .filter(|c| within_limits(source, &apply_candidate(&slices, c)))
            .collect();
        if cands.is_empty() {
            continue;
        }
        let c = &cands[rng.random_range(0..cands.len())];
        grew |= c.2.len() > c.1;
        slices = apply_candidate(&slices, c);
    }
    let mut out = from_slices(source, &slices, |c| match c {
        Choice::Merge => rng.random_bool(0.6),
        Choice::Pad => rng.random_bool(0.15),
    });
    if out == *w {
        // a unit insertion adds generators, so the word must change; the
        // empty closed word has no strand to insert on and is returned as is
        if let Some(c) = candidates(Move::UnitInsert, source, &slices).first() {
            out = from_slices(source, &apply_candidate(&slices, c), |_| false);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qx2() -> FrobeniusAlgebra {
        FrobeniusAlgebra::truncated_polynomial(2)
    }

    #[test]
    fn parses_torus() {
        let w = parse("up ; down").unwrap();
        assert_eq!(w.layers().len(), 2);
        assert!(w.is_closed());
    }

    #[test]
    fn parses_disc_with_cylinder() {
        let w = parse("cup;wire").unwrap();
        assert_eq!((w.source_circles(), w.target_circles()), (0, 1));
    }

    #[test]
    fn arity_mismatch_reports_layer() {
        assert_eq!(
            parse("cup ; down"),
            Err(BordismError::ArityMismatch {
                layer: 2,
                expected: 1,
                found: 2
            })
        );
        assert!(parse("up ; pants | cup").is_ok());
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse(""), Err(BordismError::Syntax { position: 0, .. })));
        assert!(matches!(
            parse("up ; ; down"),
            Err(BordismError::Syntax { position: 5, .. })
        ));
        assert!(matches!(
            parse("up ; dawn"),
            Err(BordismError::Syntax { position: 5, .. })
        ));
        assert!(matches!(
            parse("up down"),
            Err(BordismError::Syntax { position: 3, .. })
        ));
    }

    #[test]
    fn display_round_trips() {
        let w = parse(" up;wire|up |wire ; pants|wire|wire;pants|wire;down").unwrap();
        assert_eq!(parse(&w.to_string()).unwrap(), w);
        assert_eq!(
            w.to_string(),
            "up ; wire | up | wire ; pants | wire | wire ; pants | wire ; down"
        );
    }

    #[test]
    fn compose_examples() {
        let cup = parse("cup").unwrap();
        let cap = parse("wire | cup ; down").unwrap();
        let sphere = cup.compose(&cap).unwrap();
        assert!(sphere.is_closed());
        assert_eq!(evaluate(&sphere, &qx2()), RatMatrix::from_i64(1, 1, &[0]));

        let up_pants = parse("up").unwrap().compose(&parse("pants").unwrap()).unwrap();
        assert_eq!((up_pants.source_circles(), up_pants.target_circles()), (0, 1));

        let w = parse("pants ; wire").unwrap();
        let id = BordismWord::identity(1);
        assert_eq!(evaluate(&w.compose(&id).unwrap(), &qx2()), evaluate(&w, &qx2()));
        assert!(matches!(
            cup.compose(&cup),
            Err(BordismError::ArityMismatch { layer: 2, .. })
        ));
    }

    #[test]
    fn torus_is_dimension() {
        for a in [qx2(), FrobeniusAlgebra::cyclic_group(3)] {
            let v = evaluate(&parse("up ; down").unwrap(), &a);
            assert_eq!(v.get(0, 0), &a.closed_partition_function(1));
            assert_eq!(v.get(0, 0), &Rat::from_int(a.dim() as i64));
        }
    }

    #[test]
    fn canonical_surfaces() {
        assert_eq!(canonical_closed_surface(0).to_string(), "cup ; wire | cup ; down");
        assert_eq!(canonical_closed_surface(1).to_string(), "up ; down");
        let g2 = canonical_closed_surface(2);
        let z2 = FrobeniusAlgebra::cyclic_group(2);
        assert_eq!(evaluate(&g2, &z2).get(0, 0), &Rat::from_int(4));
        assert_eq!(evaluate(&g2, &qx2()).get(0, 0), &Rat::zero());
    }

    #[test]
    fn local_identities() {
        let a = FrobeniusAlgebra::cyclic_group(3).direct_sum(&qx2());
        let id = RatMatrix::identity(a.dim());
        let snake = parse("up | wire ; wire | down").unwrap();
        assert_eq!(evaluate(&snake, &a), id);
        let pants = evaluate(&parse("pants").unwrap(), &a);
        assert_eq!(evaluate(&parse("swap ; pants").unwrap(), &a), pants);
        let assoc_l = evaluate(&parse("pants | wire ; pants").unwrap(), &a);
        let assoc_r = evaluate(&parse("wire | pants ; pants").unwrap(), &a);
        assert_eq!(assoc_l, assoc_r);
        let with_wires = parse("pants ; wire ; wire").unwrap();
        assert_eq!(evaluate(&with_wires, &a), pants);
    }

    #[test]
    fn swap_is_an_involution() {
        let a = FrobeniusAlgebra::cyclic_group(2);
        let sq = evaluate(&parse("swap ; swap").unwrap(), &a);
        assert_eq!(sq, RatMatrix::identity(4));
    }

    #[test]
    fn every_move_preserves_evaluation() {
        let a = qx2().direct_sum(&FrobeniusAlgebra::scalar(Rat::new(2, 3)));
        let words = [
            "up ; pants ; cup | wire ; pants ; wire",
            "pants | swap ; pants | wire ; down",
        ];
        for text in words {
            let w = parse(text).unwrap();
            let v = evaluate(&w, &a);
            for mv in Move::ALL {
                for at in 0..6 {
                    if let Some(w2) = apply_move(&w, mv, at) {
                        assert_eq!(evaluate(&w2, &a), v, "{mv:?} at {at}: {w2}");
                    }
                }
            }
        }
    }

    #[test]
    fn random_decompositions_differ_and_agree() {
        let a = FrobeniusAlgebra::cyclic_group(2);
        for g in 0..3 {
            let w = canonical_closed_surface(g);
            for seed in 0..20 {
                let w2 = random_equivalent_decomposition(&w, seed);
                assert_ne!(w2, w);
                assert_eq!(evaluate(&w2, &a), evaluate(&w, &a), "seed {seed}: {w2}");
            }
        }
        let id = BordismWord::identity(2);
        assert_ne!(random_equivalent_decomposition(&id, 3), id);
    }

    #[test]
    fn decompositions_are_seed_deterministic() {
        let w = canonical_closed_surface(2);
        assert_eq!(
            random_equivalent_decomposition(&w, 42),
            random_equivalent_decomposition(&w, 42)
        );
    }
}
