use b64lite::{GeneralPurpose, NO_PAD, PAD, STANDARD, URL_SAFE};

pub fn random_engine(data: &[u8]) -> GeneralPurpose {
    let pick = data.first().copied().unwrap_or(0);
    let base = if pick & 1 == 0 { STANDARD } else { URL_SAFE };
    let _config = if pick & 2 == 0 { PAD } else { NO_PAD };
    base
}
