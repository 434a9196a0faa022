//! Reserved tokens and the per-formulation vocabularies.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::{FormulationId, MatrixEntry};
use crate::circuit::{DeviceKind, DutyCycle, PortKind, Slot};

pub const SEP: &str = "<sep>";
pub const SELECT: &str = "<select>";
pub const UNSELECT: &str = "<unselect>";
pub const COMMA: &str = ",";
pub const OPEN: &str = "(";
pub const CLOSE: &str = ")";

/// Largest device identifier with its own token.
pub const MAX_IDENTIFIER: usize = 12;

pub const DUTY_OPTIONS_LABEL: &[&str] = &["Duty", "cycle", "options", ":"];
pub const RATIO_LABEL: &[&str] = &["Voltage", "conversion", "ratio", ":"];
pub const EFFICIENCY_LABEL: &[&str] = &["Efficiency", ":"];
pub const VERTICES_LABEL: &[&str] = &["Vertices", ":"];
pub const DUTY_LABEL: &[&str] = &["Duty", "cycle", ":"];
pub const CONNECTIONS_LABEL: &[&str] = &["Connections", ":"];

const NUMERAL_CHARS: &[&str] = &["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", ".", "-"];
const PINS: [Slot; 4] = [Slot::D, Slot::G, Slot::S, Slot::B];

pub fn port_token(p: PortKind) -> &'static str {
    match p {
        PortKind::Vin => "<VIN>",
        PortKind::Vout => "<VOUT>",
        PortKind::Gnd => "<GND>",
    }
}

pub fn kind_token(k: DeviceKind) -> &'static str {
    match k {
        DeviceKind::Sa => "<Sa>",
        DeviceKind::Sb => "<Sb>",
        DeviceKind::C => "<C>",
        DeviceKind::L => "<L>",
        DeviceKind::Nmos => "<NMOS>",
        DeviceKind::Pmos => "<PMOS>",
    }
}

pub fn duty_token(d: DutyCycle) -> &'static str {
    match d {
        DutyCycle::D01 => "<duty_0.1>",
        DutyCycle::D03 => "<duty_0.3>",
        DutyCycle::D05 => "<duty_0.5>",
        DutyCycle::D07 => "<duty_0.7>",
        DutyCycle::D09 => "<duty_0.9>",
    }
}

/// Single fused device token used by the canonical formulation, e.g. `<Sa0>`.
pub fn fused_token(k: DeviceKind, id: usize) -> String {
    format!("<{}{id}>", k.name())
}

pub fn port_from_token(tok: &str) -> Option<PortKind> {
    PortKind::ALL.into_iter().find(|&p| port_token(p) == tok)
}

pub fn kind_from_token(tok: &str) -> Option<DeviceKind> {
    DeviceKind::ALL.into_iter().find(|&k| kind_token(k) == tok)
}

pub fn duty_from_token(tok: &str) -> Option<DutyCycle> {
    DutyCycle::ALL.into_iter().find(|&d| duty_token(d) == tok)
}

pub fn pin_from_token(tok: &str) -> Option<Slot> {
    PINS.into_iter().find(|p| p.label() == tok)
}

/// Parses a canonical decimal identifier (`0`..=`12`, no leading zeros).
pub fn id_from_token(tok: &str) -> Option<usize> {
    let id: usize = tok.parse().ok()?;
    (id <= MAX_IDENTIFIER && id.to_string() == tok).then_some(id)
}

pub fn fused_from_token(tok: &str) -> Option<(DeviceKind, usize)> {
    let inner = tok.strip_prefix('<')?.strip_suffix('>')?;
    let split = inner.find(|c: char| c.is_ascii_digit())?;
    let kind = DeviceKind::from_name(&inner[..split]).filter(|k| !k.is_transistor())?;
    let id = id_from_token(&inner[split..])?;
    Some((kind, id))
}

/// The closed token set of one formulation.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    formulation: FormulationId,
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    fn build(formulation: FormulationId) -> Self {
        let mut tokens: Vec<String> = Vec::new();
        let mut add = |t: &str| {
            if !tokens.iter().any(|x| x == t) {
                tokens.push(t.to_string());
            }
        };
        let numeric_labels = [DUTY_OPTIONS_LABEL, RATIO_LABEL, EFFICIENCY_LABEL];
        let two_terminal = DeviceKind::TWO_TERMINAL;
        use FormulationId::*;

        match formulation {
            Cf => {
                for label in numeric_labels
                    .iter()
                    .chain(&[VERTICES_LABEL, DUTY_LABEL, CONNECTIONS_LABEL])
                {
                    label.iter().for_each(|t| add(t));
                }
                NUMERAL_CHARS.iter().for_each(|t| add(t));
                [OPEN, CLOSE, COMMA].iter().for_each(|t| add(t));
                PortKind::ALL.iter().for_each(|&p| add(port_token(p)));
                for k in two_terminal {
                    for id in 0..=MAX_IDENTIFIER {
                        add(&fused_token(k, id));
                    }
                }
            }
            Pm | Fm => {
                numeric_labels.iter().flat_map(|l| l.iter()).for_each(|t| add(t));
                if formulation == Pm {
                    NUMERAL_CHARS.iter().for_each(|t| add(t));
                }
                PortKind::ALL.iter().for_each(|&p| add(port_token(p)));
                two_terminal.iter().for_each(|&k| add(kind_token(k)));
                add(SEP);
                MatrixEntry::ALL.iter().for_each(|e| add(e.token()));
                add(SELECT);
                add(UNSELECT);
            }
            Sfm | Sfci | SfciNct | SfciNdp => {
                add(SEP);
                DutyCycle::ALL.iter().for_each(|&d| add(duty_token(d)));
                PortKind::ALL.iter().for_each(|&p| add(port_token(p)));
                two_terminal.iter().for_each(|&k| add(kind_token(k)));
                MatrixEntry::ALL.iter().for_each(|e| add(e.token()));
                if formulation != Sfm {
                    for id in 0..=MAX_IDENTIFIER {
                        add(&id.to_string());
                    }
                    add(COMMA);
                }
                if formulation == Sfci {
                    add(kind_token(DeviceKind::Nmos));
                    add(kind_token(DeviceKind::Pmos));
                    PINS.iter().for_each(|p| add(p.label()));
                }
            }
        }

        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            formulation,
            tokens,
            index,
        }
    }

    pub fn formulation(&self) -> FormulationId {
        self.formulation
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn id_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// The vocabulary of `f`. Built once and shared.
pub fn vocabulary(f: FormulationId) -> &'static Vocabulary {
    static VOCABS: OnceLock<Vec<Vocabulary>> = OnceLock::new();
    let all = VOCABS.get_or_init(|| FormulationId::ALL.iter().map(|&f| Vocabulary::build(f)).collect());
    &all[f as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sfm_contains_reserved_set() {
        let v = vocabulary(FormulationId::Sfm);
        for t in [
            "<sep>", "<duty_0.1>", "<duty_0.3>", "<duty_0.5>", "<duty_0.7>", "<duty_0.9>", "<VIN>",
            "<VOUT>", "<GND>", "<Sa>", "<Sb>", "<C>", "<L>", "<no_edge>", "<edge_1>", "<edge_2>",
            "<both_edges>",
        ] {
            assert!(v.contains(t), "{t}");
        }
        assert_eq!(v.len(), 17);
    }

    #[test]
    fn sfci_adds_identifiers() {
        let v = vocabulary(FormulationId::Sfci);
        assert!(v.contains("0"));
        assert!(v.contains("12"));
        assert!(!v.contains("13"));
        assert!(v.contains("<NMOS>"));
        for t in vocabulary(FormulationId::Sfm).tokens() {
            assert!(v.contains(t));
        }
    }

    #[test]
    fn cf_has_no_duty_tokens() {
        let v = vocabulary(FormulationId::Cf);
        assert!(v.tokens().iter().all(|t| !t.starts_with("<duty_")));
        assert!(v.contains("<Sa0>"));
        assert!(v.contains("<L12>"));
    }

    #[test]
    fn stable_ids() {
        let a = vocabulary(FormulationId::Pm);
        assert_eq!(a.id_of(a.tokens()[5].as_str()), Some(5));
        assert_eq!(a.formulation(), FormulationId::Pm);
    }

    #[test]
    fn token_parsers() {
        assert_eq!(id_from_token("07"), None);
        assert_eq!(id_from_token("7"), Some(7));
        assert_eq!(fused_from_token("<Sb11>"), Some((DeviceKind::Sb, 11)));
        assert_eq!(fused_from_token("<Sb>"), None);
        assert_eq!(fused_from_token("<NMOS0>"), None);
    }
}
