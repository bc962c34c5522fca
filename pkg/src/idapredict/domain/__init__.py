from .core import (
    NONE_CTX,
    BlankType,
    CubeDomain,
    CubeState,
    MoveContext,
    TileDomain,
    TileState,
    classify_blank_type,
    decode_state,
    domain_of,
    dual_state,
    encode_state,
    expand,
    make_domain,
    random_state,
    symmetry_map,
)

__all__ = [
    "NONE_CTX", "BlankType", "CubeDomain", "CubeState", "MoveContext", "TileDomain", "TileState",
    "classify_blank_type", "decode_state", "domain_of", "dual_state", "encode_state", "expand",
    "make_domain", "random_state", "symmetry_map",
]
