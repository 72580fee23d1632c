//! Built-in structure files.

pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! entries {
    ($($name:literal),* $(,)?) => {
        &[$(Entry { name: $name, text: include_str!(concat!("../fixtures/", $name, ".gv")) }),*]
    };
}

pub const CATALOG: &[Entry] = entries![
    "flat-complex-R2",
    "flat-symplectic-R2",
    "curved-symplectic-R2",
    "flat-kahler-R4",
    "psi-shifted-hermitian-R4",
    "nonclosed-psi-R4",
    "twisted-complex-R4",
    "hitchin-nonintegrable-R4",
    "hitchin-constant-R4",
    "darboux-contact-R3",
    "perturbed-contact-R3",
    "cosymplectic-R3",
    "heisenberg-sasakian-R3",
    "heisenberg-sasakian-conjugate-pair",
    "rescaled-heisenberg-pair",
];

pub fn catalog() -> &'static [Entry] {
    CATALOG
}

pub fn lookup(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}
