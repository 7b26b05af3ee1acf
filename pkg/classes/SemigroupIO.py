import hashlib
import json
import logging
from typing import Any, Dict, Optional, Tuple

from .Catalog import builtin
from .Errors import ParseError
from .FreeProduct import TruncatedFreeProduct
from .KrExpansion import KrExpansion
from .Semigroup import FiniteSemigroup, GeneratingMap, from_table

logger = logging.getLogger('SemigroupIO')

BUILTIN_PREFIX = "builtin:"


def content_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def parse_semigroup(data: Dict[str, Any]) -> Tuple[FiniteSemigroup, Optional[GeneratingMap]]:
    """
    Semigroup from the interchange format
    `{"order": n, "table": [[...]], "names": [...], "generators": {"a": i}}`.
    Generator targets may be indices or element names.
    """
    if not isinstance(data, dict):
        raise ParseError("semigroup document must be a JSON object")
    if "table" not in data:
        raise ParseError("missing key 'table'")
    table = data["table"]
    if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
        raise ParseError("'table' must be a list of rows")
    if any(not isinstance(v, int) or isinstance(v, bool) for row in table for v in row):
        raise ParseError("table entries must be integers")
    if "order" in data and data["order"] != len(table):
        raise ParseError(f"order {data['order']} does not match a table of {len(table)} rows")
    identity = data.get("identity")
    S = from_table(table, data.get("names"), identity_index=identity)
    gmap = None
    generators = data.get("generators")
    if generators is not None:
        if not isinstance(generators, dict) or not generators:
            raise ParseError("'generators' must be a nonempty object")
        gmap = GeneratingMap.from_dict(S, generators)
    return S, gmap


def load_semigroup(source: str) -> Tuple[FiniteSemigroup, Optional[GeneratingMap], str]:
    """
    Load a semigroup from a JSON file or a `builtin:<name>` reference.
    Returns the semigroup, its generators (if any) and the content hash.
    """
    if source.startswith(BUILTIN_PREFIX):
        S, gmap = builtin(source[len(BUILTIN_PREFIX):])
        return S, gmap, content_hash(source.encode())
    try:
        with open(source, 'rb') as f:
            raw = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {source}: {e}") from None
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"{source} is not valid JSON: {e}") from None
    S, gmap = parse_semigroup(data)
    logger.debug(f"Loaded {source}: order {S.order}")
    return S, gmap, content_hash(raw)


def semigroup_to_dict(S: FiniteSemigroup, gmap: Optional[GeneratingMap] = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "order": S.order,
        "table": S.table.tolist(),
        "names": list(S.names),
    }
    if S.identity_index is not None:
        data["identity"] = S.identity_index
    if gmap is not None:
        data["generators"] = gmap.to_dict()
    return data


def expansion_to_dict(expansion: KrExpansion) -> Dict[str, Any]:
    """Core format of the expansion plus the projection/letter-map/representatives sidecar."""
    data = semigroup_to_dict(expansion.result, expansion.generating_map)
    data["sidecar"] = {
        "projection": expansion.projection.map.tolist(),
        "letter_map": dict(zip(expansion.gmap.alphabet, expansion.letter_map)),
        "representatives": [expansion.representative_text(c) for c in range(expansion.order)],
    }
    return data


def product_to_dict(product: TruncatedFreeProduct) -> Dict[str, Any]:
    data = semigroup_to_dict(product.result)
    data["cap"] = product.cap
    data["forms"] = [form.to_json() for form in product.forms]
    data["zero"] = product.zero
    return data


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def write_text(path: str, text: str):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
