//! Exact arithmetic in the graph inverse semigroup.
//!
//! A nonzero element is kept in the normal form `(up)⁺ 1_V (down)⁻`: `up` and
//! `down` are directed paths of the graph starting at the base vertex `V`.
//! As letters, the element reads `up` reversed with plus signs followed by
//! `down` with minus signs. Products are computed by cancelling the down path
//! of the left factor against the up path of the right factor, which is the
//! same bracket matching a pushdown automaton does for Dyck words.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::graph::{ContractionData, DirectedMultigraph, EdgeId, LambdaImage, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub edge: EdgeId,
    pub sign: Sign,
}

impl Letter {
    pub fn minus(edge: EdgeId) -> Self {
        Letter {
            edge,
            sign: Sign::Minus,
        }
    }

    pub fn plus(edge: EdgeId) -> Self {
        Letter {
            edge,
            sign: Sign::Plus,
        }
    }

    pub fn inverse(self) -> Self {
        let sign = match self.sign {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        };
        Letter { sign, ..self }
    }

    /// Source vertex in the doubled graph.
    pub fn source(self, g: &DirectedMultigraph) -> VertexId {
        match self.sign {
            Sign::Minus => g.src(self.edge),
            Sign::Plus => g.tgt(self.edge),
        }
    }

    /// Target vertex in the doubled graph.
    pub fn target(self, g: &DirectedMultigraph) -> VertexId {
        match self.sign {
            Sign::Minus => g.tgt(self.edge),
            Sign::Plus => g.src(self.edge),
        }
    }

    /// All `2·card(E)` letters, minus letters first, in edge order.
    pub fn alphabet(g: &DirectedMultigraph) -> Vec<Letter> {
        g.edge_ids()
            .map(Letter::minus)
            .chain(g.edge_ids().map(Letter::plus))
            .collect()
    }

    pub fn display(self, g: &DirectedMultigraph) -> String {
        let s = match self.sign {
            Sign::Minus => '-',
            Sign::Plus => '+',
        };
        format!("{}{}", g.edge_name(self.edge), s)
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Parses whitespace-separated tokens `edgeId-` / `edgeId+`.
    pub fn parse(text: &str, g: &DirectedMultigraph) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, sign) = match tok.char_indices().last() {
                Some((i, '-')) => (&tok[..i], Sign::Minus),
                Some((i, '+')) => (&tok[..i], Sign::Plus),
                _ => return Err(Error::BadToken(tok.to_string())),
            };
            if name.is_empty() {
                return Err(Error::BadToken(tok.to_string()));
            }
            letters.push(Letter {
                edge: g.edge_by_name(name)?,
                sign,
            });
        }
        Ok(Word(letters))
    }

    pub fn display(&self, g: &DirectedMultigraph) -> String {
        let mut out = String::new();
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&l.display(g));
        }
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotation(&self, k: usize) -> Word {
        let n = self.0.len();
        Word((0..n).map(|i| self.0[(k + i) % n]).collect())
    }
}

/// Reverses the word and flips every sign.
pub fn invert(w: &Word) -> Word {
    Word(w.0.iter().rev().map(|l| l.inverse()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub up: Vec<EdgeId>,
    pub base: VertexId,
    pub down: Vec<EdgeId>,
}

impl NormalForm {
    pub fn vertex(v: VertexId) -> Self {
        NormalForm {
            up: Vec::new(),
            base: v,
            down: Vec::new(),
        }
    }

    pub fn start(&self, g: &DirectedMultigraph) -> VertexId {
        self.up.last().map_or(self.base, |&e| g.tgt(e))
    }

    pub fn end(&self, g: &DirectedMultigraph) -> VertexId {
        self.down.last().map_or(self.base, |&e| g.tgt(e))
    }
}

/// An element of the graph inverse semigroup, plus a universal identity that
/// stands for the empty product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Zero,
    Identity,
    Nf(NormalForm),
}

impl Element {
    pub fn vertex(v: VertexId) -> Self {
        Element::Nf(NormalForm::vertex(v))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Element::Zero)
    }

    pub fn as_nf(&self) -> Option<&NormalForm> {
        match self {
            Element::Nf(nf) => Some(nf),
            _ => None,
        }
    }

    /// `Some(V)` iff the element is the vertex idempotent `1_V`.
    pub fn vertex_idempotent(&self) -> Option<VertexId> {
        match self {
            Element::Nf(nf) if nf.up.is_empty() && nf.down.is_empty() => Some(nf.base),
            _ => None,
        }
    }

    pub fn is_idempotent_nf(&self) -> bool {
        matches!(self, Element::Nf(nf) if nf.up == nf.down)
    }

    /// Right multiplication by a single letter.
    pub fn push(&self, letter: Letter, g: &DirectedMultigraph) -> Element {
        let mut nf = match self {
            Element::Zero => return Element::Zero,
            Element::Identity => {
                return match letter.sign {
                    Sign::Minus => Element::Nf(NormalForm {
                        up: Vec::new(),
                        base: g.src(letter.edge),
                        down: vec![letter.edge],
                    }),
                    Sign::Plus => Element::Nf(NormalForm {
                        up: vec![letter.edge],
                        base: g.src(letter.edge),
                        down: Vec::new(),
                    }),
                }
            }
            Element::Nf(nf) => nf.clone(),
        };
        if nf.end(g) != letter.source(g) {
            return Element::Zero;
        }
        let e = letter.edge;
        match letter.sign {
            Sign::Minus => nf.down.push(e),
            Sign::Plus => match nf.down.pop() {
                Some(d) if d == e => {}
                Some(_) => return Element::Zero,
                None => {
                    nf.up.insert(0, e);
                    nf.base = g.src(e);
                }
            },
        }
        Element::Nf(nf)
    }

    /// Right multiplication by a vertex idempotent.
    pub fn push_idempotent(&self, v: VertexId, g: &DirectedMultigraph) -> Element {
        match self {
            Element::Zero => Element::Zero,
            Element::Identity => Element::vertex(v),
            Element::Nf(nf) if nf.end(g) == v => self.clone(),
            Element::Nf(_) => Element::Zero,
        }
    }

    pub fn multiply(&self, other: &Element, g: &DirectedMultigraph) -> Element {
        let (x, y) = match (self, other) {
            (Element::Zero, _) | (_, Element::Zero) => return Element::Zero,
            (Element::Identity, y) => return y.clone(),
            (x, Element::Identity) => return x.clone(),
            (Element::Nf(x), Element::Nf(y)) => (x, y),
        };
        if x.end(g) != y.start(g) {
            return Element::Zero;
        }
        let (mut i, mut j) = (x.down.len(), y.up.len());
        while i > 0 && j > 0 {
            if x.down[i - 1] != y.up[j - 1] {
                return Element::Zero;
            }
            i -= 1;
            j -= 1;
        }
        if j == 0 {
            let mut down = x.down[..i].to_vec();
            down.extend_from_slice(&y.down);
            Element::Nf(NormalForm {
                up: x.up.clone(),
                base: x.base,
                down,
            })
        } else {
            let mut up = y.up[..j].to_vec();
            up.extend_from_slice(&x.up);
            Element::Nf(NormalForm {
                up,
                base: y.base,
                down: y.down.clone(),
            })
        }
    }

    /// Serialises a nonzero element back to letters. The identity maps to the
    /// empty word.
    pub fn to_word(&self) -> Option<Word> {
        match self {
            Element::Zero => None,
            Element::Identity => Some(Word::default()),
            Element::Nf(nf) => Some(Word(
                nf.up
                    .iter()
                    .rev()
                    .map(|&e| Letter::plus(e))
                    .chain(nf.down.iter().map(|&e| Letter::minus(e)))
                    .collect(),
            )),
        }
    }

    pub fn pow(&self, k: usize, g: &DirectedMultigraph) -> Element {
        let mut acc = Element::Identity;
        for _ in 0..k {
            acc = acc.multiply(self, g);
        }
        acc
    }

    pub fn display(&self, g: &DirectedMultigraph) -> String {
        match self {
            Element::Zero => "0".to_string(),
            Element::Identity => "1".to_string(),
            Element::Nf(nf) => {
                let path = |p: &[EdgeId]| {
                    p.iter()
                        .map(|&e| g.edge_name(e))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let mut s = String::new();
                let _ = write!(
                    s,
                    "[{} | {} | {}]",
                    path(&nf.up),
                    g.vertex_name(nf.base),
                    path(&nf.down)
                );
                s
            }
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

/// Left-to-right stack reduction of a word.
pub fn reduce(w: &Word, g: &DirectedMultigraph) -> Result<Element> {
    if let Some(l) = w.0.iter().find(|l| l.edge.index() >= g.edge_count()) {
        return Err(Error::UnknownEdge(format!("#{}", l.edge.0)));
    }
    Ok(reduce_letters(&w.0, g))
}

pub(crate) fn reduce_letters(letters: &[Letter], g: &DirectedMultigraph) -> Element {
    let mut acc = Element::Identity;
    for &l in letters {
        acc = acc.push(l, g);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

pub fn multiply(x: &Element, y: &Element, g: &DirectedMultigraph) -> Element {
    x.multiply(y, g)
}

/// How the powers of a nonzero element behave.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PowerClass {
    /// `x² = 0`.
    Nilpotent,
    Idempotent,
    /// `x = (up)⁺ (cycle)⁻ (up)⁻`: every power is nonzero and grows the down path.
    DownExcess(Vec<EdgeId>),
    /// Mirror image of [`PowerClass::DownExcess`].
    UpExcess(Vec<EdgeId>),
}

impl PowerClass {
    pub fn is_power_stable(&self) -> bool {
        !matches!(self, PowerClass::Nilpotent)
    }
}

/// Decides the power behaviour of `x` by comparing path suffixes.
pub fn classify_powers(x: &Element, g: &DirectedMultigraph) -> PowerClass {
    let nf = match x {
        Element::Zero => return PowerClass::Nilpotent,
        Element::Identity => return PowerClass::Idempotent,
        Element::Nf(nf) => nf,
    };
    let (up, down) = (&nf.up, &nf.down);
    if up == down {
        return PowerClass::Idempotent;
    }
    let closed = |cycle: &[EdgeId]| g.tgt(*cycle.last().unwrap()) == nf.base;
    if down.len() > up.len() && down.ends_with(up) {
        let cycle = &down[..down.len() - up.len()];
        if closed(cycle) {
            return PowerClass::DownExcess(cycle.to_vec());
        }
    } else if up.len() > down.len() && up.ends_with(down) {
        let cycle = &up[..up.len() - down.len()];
        if closed(cycle) {
            return PowerClass::UpExcess(cycle.to_vec());
        }
    }
    PowerClass::Nilpotent
}

/// Image of a word in the semigroup of the contracted graph: tree letters
/// become root idempotents, kept letters keep their sign.
pub fn lambda_image(w: &Word, cd: &ContractionData) -> Element {
    let hat = &cd.contracted;
    let mut acc = Element::Identity;
    for &l in &w.0 {
        acc = match cd.lambda_edge[l.edge.index()] {
            LambdaImage::Kept(e) => acc.push(
                Letter {
                    edge: e,
                    sign: l.sign,
                },
                hat,
            ),
            LambdaImage::Idempotent(r) => acc.push_idempotent(r, hat),
        };
        if acc.is_zero() {
            break;
        }
    }
    acc
}
