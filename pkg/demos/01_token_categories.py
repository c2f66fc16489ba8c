# What category is a token? Characters carry a Unicode class (letter,
# number, punctuation, ...) and, for letters, a writing system. A token
# votes with its characters: the most frequent category wins, and the
# word-boundary marker never votes.

from embedgeo import BOUNDARY_MARKER, categorize_token, char_category

print("character categories")
print("--------------------")
for ch in ["a", "ы", "7", "!", "あ", "ア", "漢", "한", "€", "½"]:
    cat = char_category(ch)
    label = f"{cat.klass}/{cat.script}" if cat.script else cat.klass
    print(f"  {ch!r:6} -> {label}")

print()
print("token categories (majority vote)")
print("--------------------------------")
tokens = [
    "doesn't",        # letters + one apostrophe: still LATIN
    "▁the",           # the marker is excluded from the vote
    "▁123",           # all digits once the marker is gone
    "▁",              # marker-only token falls back to its own class
    "да",             # CYRILLIC
    "カタカナ",        # KATAKANA
    "漢字",           # Han ideographs are labeled CJK
    "a1b2",           # tie: letters beat non-letter classes
    "1!",             # tie between classes: first occurrence wins
]
for tok in tokens:
    print(f"  {tok!r:12} -> {categorize_token(tok)}")

print()
print("the marker rule in one line:")
word = "of"
print(
    f"  categorize({word!r}) == categorize({BOUNDARY_MARKER + word!r}) "
    f"== {categorize_token(word)}"
)
