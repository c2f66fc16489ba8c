#!/usr/bin/env python3
"""Regenerate src/embedgeo/_ucd_table.py from pinned Unicode data.

Sources:
  - general category: the interpreter's unicodedata module
  - script property: fontTools.unicodedata (embedded Scripts.txt ranges)

Both must report the same Unicode version or generation aborts; the
version is stamped into the generated module so analysis reports can
record it. Run from the repo root:

    python tools/build_unicode_table.py
"""

import sys
import unicodedata
from bisect import bisect_right
from pathlib import Path

import fontTools.unicodedata
from fontTools.unicodedata import Scripts

OUT_PATH = Path(__file__).resolve().parent.parent / "src" / "embedgeo" / "_ucd_table.py"

N_CODEPOINTS = 0x110000

# Paper-style script labels: UPPER_SNAKE names; Han is folded into CJK.
RENAMES = {"Han": "CJK"}


def script_label(code: str) -> str:
    name = fontTools.unicodedata.script_name(code)
    name = RENAMES.get(name, name)
    return name.upper().replace(" ", "_").replace("-", "_")


def main() -> int:
    std_version = unicodedata.unidata_version
    ft_version = fontTools.unicodedata.Scripts.VERSION if hasattr(Scripts, "VERSION") else None
    # Older fontTools builds don't expose a VERSION attr on the data module;
    # fall back to the package-level value.
    if ft_version is None:
        import fontTools.unicodedata.Scripts as _s

        ft_version = getattr(_s, "VERSION", None)
    if ft_version is None:
        ft_version = getattr(fontTools.unicodedata, "unidata_version", None)
    if ft_version != std_version:
        print(
            f"Unicode version mismatch: stdlib {std_version} vs fontTools {ft_version}.\n"
            "Install a fontTools release matching the interpreter's Unicode data.",
            file=sys.stderr,
        )
        return 1

    script_ranges = Scripts.RANGES
    script_values = Scripts.VALUES

    def script_of(cp: int) -> str:
        return script_values[bisect_right(script_ranges, cp) - 1]

    # Run-length encode (major class, script-or-None) over the whole space.
    starts: list[int] = []
    classes: list[str] = []
    script_ids: list[int] = []
    script_names: list[str] = []
    name_to_id: dict[str, int] = {}

    prev = None
    for cp in range(N_CODEPOINTS):
        major = unicodedata.category(chr(cp))[0]
        if major == "L":
            label = script_label(script_of(cp))
            if label not in name_to_id:
                name_to_id[label] = len(script_names)
                script_names.append(label)
            key = (major, name_to_id[label])
        else:
            key = (major, -1)
        if key != prev:
            starts.append(cp)
            classes.append(key[0])
            script_ids.append(key[1])
            prev = key

    lines = [
        '"""Unicode range table: (codepoint start, major class, script).',
        "",
        "Generated by tools/build_unicode_table.py; do not edit by hand.",
        '"""',
        "",
        f'UCD_VERSION = "{std_version}"',
        "",
        f"SCRIPT_NAMES = {tuple(script_names)!r}",
        "",
        f"STARTS = {tuple(starts)!r}",
        "",
        f'CLASSES = "{"".join(classes)}"',
        "",
        f"SCRIPT_IDS = {tuple(script_ids)!r}",
        "",
    ]
    OUT_PATH.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {OUT_PATH}: {len(starts)} ranges, {len(script_names)} scripts, UCD {std_version}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
