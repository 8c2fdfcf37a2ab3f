//! Bundled example systems, by name.

use crate::error::Result;
use crate::system::{parse_substitution_file, SubstitutionSystem};

pub const FIBONACCI: &str = include_str!("../fixtures/fibonacci.sub");
pub const THUE_MORSE: &str = include_str!("../fixtures/thue_morse.sub");
pub const TAU_AAAB: &str = include_str!("../fixtures/tau_aaab.sub");
pub const ERASING_IMAGE: &str = include_str!("../fixtures/erasing_image.sub");
pub const NO_PRIMITIVE: &str = include_str!("../fixtures/no_primitive.sub");
pub const NOT_GOOD: &str = include_str!("../fixtures/not_good.sub");
pub const FIBONACCI_ERASING: &str = include_str!("../fixtures/fibonacci_erasing.sub");
pub const ERASING_THREE_LITERAL: &str = include_str!("../fixtures/erasing_three_literal.sub");
pub const PER2: &str = include_str!("../fixtures/per2.sub");
pub const PER3: &str = include_str!("../fixtures/per3.sub");
pub const CHACON: &str = include_str!("../fixtures/chacon.sub");
pub const EVENTUALLY_CONSTANT: &str = include_str!("../fixtures/eventually_constant.sub");

pub const ALL: &[(&str, &str)] = &[
    ("fibonacci", FIBONACCI),
    ("thue_morse", THUE_MORSE),
    ("tau_aaab", TAU_AAAB),
    ("erasing_image", ERASING_IMAGE),
    ("no_primitive", NO_PRIMITIVE),
    ("not_good", NOT_GOOD),
    ("fibonacci_erasing", FIBONACCI_ERASING),
    ("erasing_three_literal", ERASING_THREE_LITERAL),
    ("per2", PER2),
    ("per3", PER3),
    ("chacon", CHACON),
    ("eventually_constant", EVENTUALLY_CONSTANT),
];

/// Parses a bundled fixture; `None` for unknown names.
pub fn load(name: &str) -> Option<Result<SubstitutionSystem>> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| parse_substitution_file(text).map(|s| s.with_label(*n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for (name, _) in ALL {
            load(name).unwrap().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(load("nope").is_none());
    }

    #[test]
    fn fibonacci_erasing_image_is_fibonacci() {
        let fib = load("fibonacci").unwrap().unwrap().image_prefix(2000).unwrap();
        let er = load("fibonacci_erasing").unwrap().unwrap().image_prefix(2000).unwrap();
        assert_eq!(fib, er);
    }

    #[test]
    fn literal_erasing_three_is_periodic() {
        let s = load("erasing_three_literal").unwrap().unwrap();
        let out = s.output_alphabet().render(&s.image_prefix(16).unwrap());
        assert_eq!(out, "0010001000100010");
    }
}
