//! Position-tracking reader over an element sequence.

use std::fmt;

use super::{DecodeError, Element, Vocabulary};

/// Which half of a [`SequencePair`](super::SequencePair) an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Input => "input",
            Side::Output => "output",
        })
    }
}

pub(crate) struct Cursor<'a> {
    side: Side,
    elems: &'a [Element],
    pos: usize,
    vocab: &'a Vocabulary,
}

impl<'a> Cursor<'a> {
    pub fn new(side: Side, elems: &'a [Element], vocab: &'a Vocabulary) -> Self {
        Self {
            side,
            elems,
            pos: 0,
            vocab,
        }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.elems.len()
    }

    pub fn peek(&self) -> Option<&'a Element> {
        self.elems.get(self.pos)
    }

    pub fn peek_token(&self) -> Option<&'a str> {
        self.peek().and_then(Element::as_token)
    }

    /// Next element, which must be a token of the vocabulary.
    pub fn token(&mut self, expected: &'static str) -> Result<&'a str, DecodeError> {
        match self.elems.get(self.pos) {
            None => Err(DecodeError::Truncated {
                side: self.side,
                expected,
            }),
            Some(Element::Scalar(_)) => Err(DecodeError::UnexpectedScalar {
                side: self.side,
                pos: self.pos,
            }),
            Some(Element::Token(t)) if !self.vocab.contains(t) => Err(DecodeError::UnknownToken {
                side: self.side,
                pos: self.pos,
                token: t.clone(),
            }),
            Some(Element::Token(t)) => {
                self.pos += 1;
                Ok(t)
            }
        }
    }

    /// Next token, parsed by `parse`.
    pub fn parse<T>(
        &mut self,
        expected: &'static str,
        parse: impl FnOnce(&str) -> Option<T>,
    ) -> Result<T, DecodeError> {
        let tok = self.token(expected)?;
        parse(tok).ok_or_else(|| self.unexpected_prev(tok, expected))
    }

    pub fn expect(&mut self, want: &str, expected: &'static str) -> Result<(), DecodeError> {
        let tok = self.token(expected)?;
        if tok == want {
            Ok(())
        } else {
            Err(self.unexpected_prev(tok, expected))
        }
    }

    pub fn expect_all(&mut self, words: &[&str], expected: &'static str) -> Result<(), DecodeError> {
        words.iter().try_for_each(|w| self.expect(w, expected))
    }

    pub fn scalar(&mut self, expected: &'static str) -> Result<f64, DecodeError> {
        match self.elems.get(self.pos) {
            None => Err(DecodeError::Truncated {
                side: self.side,
                expected,
            }),
            Some(Element::Scalar(x)) => {
                self.pos += 1;
                Ok(*x)
            }
            Some(Element::Token(t)) => Err(if self.vocab.contains(t) {
                DecodeError::UnexpectedToken {
                    side: self.side,
                    pos: self.pos,
                    found: t.clone(),
                    expected,
                }
            } else {
                DecodeError::UnknownToken {
                    side: self.side,
                    pos: self.pos,
                    token: t.clone(),
                }
            }),
        }
    }

    /// Error for the token just consumed.
    pub fn unexpected_prev(&self, found: &str, expected: &'static str) -> DecodeError {
        DecodeError::UnexpectedToken {
            side: self.side,
            pos: self.pos - 1,
            found: found.to_string(),
            expected,
        }
    }

    pub fn malformed_numeral(&self, pos: usize) -> DecodeError {
        DecodeError::MalformedNumeral { side: self.side, pos }
    }
}
