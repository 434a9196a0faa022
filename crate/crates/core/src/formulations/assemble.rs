//! Shared decoding pieces: the port/device declaration and net assembly.

use super::cursor::Cursor;
use super::vocab::{kind_from_token, port_token, SELECT, UNSELECT};
use super::{DecodeError, Element};
use crate::circuit::{full_order, DeviceKind, DutyCycle, PortKind, Slot, Terminal, Topology, Vertex};

pub(crate) fn port_tokens() -> impl Iterator<Item = Element> {
    PortKind::ALL.into_iter().map(|p| Element::token(port_token(p)))
}

pub(crate) fn read_ports(cur: &mut Cursor<'_>) -> Result<(), DecodeError> {
    PortKind::ALL
        .into_iter()
        .try_for_each(|p| cur.expect(port_token(p), "port declaration"))
}

/// Device kinds declared by bare kind tokens up to the end of the input.
pub(crate) fn read_bare_kinds(cur: &mut Cursor<'_>) -> Result<Vec<DeviceKind>, DecodeError> {
    let mut kinds = Vec::new();
    while !cur.at_end() {
        kinds.push(cur.parse("device kind", kind_from_token)?);
    }
    Ok(kinds)
}

pub(crate) fn check_duty_options(values: &[f64]) -> Result<(), DecodeError> {
    let ok = values.len() == DutyCycle::ALL.len()
        && values
            .iter()
            .zip(DutyCycle::ALL)
            .all(|(x, d)| (x - d.value()).abs() < 1e-9);
    if ok {
        Ok(())
    } else {
        Err(DecodeError::DutyOptions)
    }
}

pub(crate) fn select_block(duty: DutyCycle) -> impl Iterator<Item = Element> {
    DutyCycle::ALL
        .into_iter()
        .map(move |d| Element::token(if d == duty { SELECT } else { UNSELECT }))
}

pub(crate) fn read_select_block(cur: &mut Cursor<'_>) -> Result<DutyCycle, DecodeError> {
    let mut chosen = None;
    for d in DutyCycle::ALL {
        let tok = match cur.token("duty selection") {
            Err(DecodeError::Truncated { .. }) => return Err(DecodeError::MissingDuty),
            other => other?,
        };
        match tok {
            SELECT if chosen.is_some() => {
                return Err(DecodeError::InvalidDuty("more than one option selected".into()))
            }
            SELECT => chosen = Some(d),
            UNSELECT => {}
            other => return Err(cur.unexpected_prev(other, "<select> or <unselect>")),
        }
    }
    chosen.ok_or(DecodeError::MissingDuty)
}

/// Collects nets member by member, assigning two-terminal slots by order of
/// appearance.
pub(crate) struct NetAssembler {
    kinds: Vec<DeviceKind>,
    uses: Vec<u8>,
    nets: Vec<Vec<Terminal>>,
    current: Vec<Terminal>,
}

impl NetAssembler {
    pub fn new(kinds: Vec<DeviceKind>) -> Self {
        let uses = vec![0; kinds.len()];
        Self {
            kinds,
            uses,
            nets: Vec::new(),
            current: Vec::new(),
        }
    }

    /// Declared kind of device `id`.
    pub fn declared(&self, id: usize) -> Result<DeviceKind, DecodeError> {
        self.kinds
            .get(id)
            .copied()
            .ok_or(DecodeError::IdentifierOutOfRange {
                id,
                devices: self.kinds.len(),
            })
    }

    pub fn port(&mut self, p: PortKind) -> Result<(), DecodeError> {
        self.push(Terminal::port(p))
    }

    /// Adds device `id`. `kind` is the generated kind, if the formulation
    /// carries one; `pin` is required for transistors.
    pub fn device(&mut self, kind: Option<DeviceKind>, id: usize, pin: Option<Slot>) -> Result<(), DecodeError> {
        let declared = self.declared(id)?;
        if let Some(found) = kind.filter(|&k| k != declared) {
            return Err(DecodeError::KindMismatch { id, declared, found });
        }
        let vertex = Vertex::device(declared, id);
        let slot = if declared.is_transistor() {
            pin.ok_or(DecodeError::TerminalOverflow(vertex))?
        } else {
            let slot = match self.uses[id] {
                0 => Slot::One,
                1 => Slot::Two,
                _ => return Err(DecodeError::TerminalOverflow(vertex)),
            };
            self.uses[id] += 1;
            slot
        };
        self.push(Terminal::new(vertex, slot))
    }

    fn push(&mut self, t: Terminal) -> Result<(), DecodeError> {
        if self.current.contains(&t) {
            return Err(DecodeError::DuplicateMember(t));
        }
        self.current.push(t);
        Ok(())
    }

    pub fn end_net(&mut self) -> Result<(), DecodeError> {
        if self.current.is_empty() {
            return Err(DecodeError::EmptyEdge);
        }
        self.nets.push(std::mem::take(&mut self.current));
        Ok(())
    }

    pub fn finish(self) -> Result<Topology, DecodeError> {
        Topology::new(full_order(&self.kinds), self.nets).map_err(DecodeError::Structure)
    }
}
