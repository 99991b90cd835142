"""Named stemmers behind a small registry: Snowball Spanish, Porter English, pass-through."""

from __future__ import annotations

from typing import Callable

Stemmer = Callable[[str], str]


class UnknownStemmerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Snowball Spanish stemmer
# ---------------------------------------------------------------------------

_ES_VOWELS = set("aeiouáéíóúü")


def _es_regions(word: str) -> tuple[int, int, int]:
    """Start offsets of the R1, R2 and RV suffix regions."""
    n = len(word)
    r1 = n
    for i in range(n - 1):
        if word[i] in _ES_VOWELS and word[i + 1] not in _ES_VOWELS:
            r1 = i + 2
            break
    r2 = n
    for i in range(r1, n - 1):
        if word[i] in _ES_VOWELS and word[i + 1] not in _ES_VOWELS:
            r2 = i + 2
            break
    rv = n
    if n >= 3:
        if word[1] not in _ES_VOWELS:
            for i in range(2, n):
                if word[i] in _ES_VOWELS:
                    rv = i + 1
                    break
        elif word[0] in _ES_VOWELS and word[1] in _ES_VOWELS:
            for i in range(2, n):
                if word[i] not in _ES_VOWELS:
                    rv = i + 1
                    break
        else:
            rv = 3
    return r1, r2, rv


def _suffix_in(word: str, suffix: str, region_start: int) -> bool:
    return word.endswith(suffix) and len(word) - len(suffix) >= region_start


def _longest_in(word: str, suffixes: tuple[str, ...], region_start: int) -> str | None:
    """Longest suffix that matches `word` and lies entirely within the region."""
    best = None
    for s in suffixes:
        if _suffix_in(word, s, region_start) and (best is None or len(s) > len(best)):
            best = s
    return best


_ES_PRONOUNS = ("selas", "selos", "sela", "selo", "las", "les", "los", "nos",
                "me", "se", "la", "le", "lo")
_ES_PRE_ACCENTED = {"iéndo": "iendo", "ándo": "ando", "ár": "ar", "ér": "er", "ír": "ir"}
_ES_PRE_PLAIN = ("ando", "iendo", "ar", "er", "ir")

# step-1 suffix groups, longest-match across the whole table
_ES_S1_DELETE_R2 = (
    "amientos", "imientos", "amiento", "imiento", "anzas", "icos", "icas",
    "ismos", "ables", "ibles", "istas", "anza", "ico", "ica", "ismo", "able",
    "ible", "ista", "osos", "osas", "oso", "osa",
)
_ES_S1_ADOR = ("aciones", "adoras", "adores", "ancias", "adora", "ación",
               "antes", "ancia", "ador", "ante")
_ES_S1_LOGIA = ("logías", "logía")
_ES_S1_UCION = ("uciones", "ución")
_ES_S1_ENCIA = ("encias", "encia")
_ES_S1_MENTE_PRE = ("ante", "able", "ible")
_ES_S1_IDAD = ("idades", "idad")
_ES_S1_IDAD_PRE = ("abil", "ic", "iv")
_ES_S1_IVA = ("ivas", "ivos", "iva", "ivo")

_ES_STEP2A = ("yeron", "yendo", "yamos", "yais", "yan", "yen", "yas", "yes",
              "ya", "ye", "yo", "yó")
_ES_STEP2B_GU = ("emos", "éis", "en", "es")
_ES_STEP2B_PLAIN = (
    "arían", "arías", "arán", "arás", "aríais", "aría", "aréis", "aríamos",
    "aremos", "ará", "aré",
    "erían", "erías", "erán", "erás", "eríais", "ería", "eréis", "eríamos",
    "eremos", "erá", "eré",
    "irían", "irías", "irán", "irás", "iríais", "iría", "iréis", "iríamos",
    "iremos", "irá", "iré",
    "aba", "ada", "ida", "ía", "ara", "iera", "ad", "ed", "id",
    "ase", "iese", "aste", "iste", "an", "aban", "ían", "aran", "ieran",
    "asen", "iesen", "aron", "ieron",
    "ado", "ido", "ando", "iendo", "ió", "ar", "er", "ir",
    "as", "abas", "adas", "idas", "ías", "aras", "ieras", "ases", "ieses",
    "ís", "áis",
    "abais", "íais", "arais", "ierais", "aseis", "ieseis", "asteis", "isteis",
    "ados", "idos", "amos", "ábamos", "íamos", "imos",
    "áramos", "iéramos", "iésemos", "ásemos",
)
_ES_STEP3_DEL = ("os", "a", "o", "á", "í", "ó")
_ES_ACCENT_MAP = str.maketrans("áéíóú", "aeiou")


def spanish_stem(word: str) -> str:
    word = word.lower()
    if len(word) <= 2:
        return word.translate(_ES_ACCENT_MAP)
    r1, r2, rv = _es_regions(word)

    # step 0: attached pronoun
    pron = _longest_in(word, _ES_PRONOUNS, 0)
    if pron:
        base = word[: -len(pron)]
        pats = tuple(_ES_PRE_ACCENTED) + _ES_PRE_PLAIN + ("yendo",)
        pat = _longest_in(base, pats, rv)
        if pat in _ES_PRE_ACCENTED:
            word = base[: -len(pat)] + _ES_PRE_ACCENTED[pat]
        elif pat == "yendo":
            if len(base) > 5 and base[-6] == "u":
                word = base
        elif pat is not None:
            word = base

    # step 1: standard suffixes (longest match across all groups, no backtracking)
    step1_removed = False
    all_s1 = (
        [(s, "del") for s in _ES_S1_DELETE_R2]
        + [(s, "ador") for s in _ES_S1_ADOR]
        + [(s, "logia") for s in _ES_S1_LOGIA]
        + [(s, "ucion") for s in _ES_S1_UCION]
        + [(s, "encia") for s in _ES_S1_ENCIA]
        + [("amente", "amente"), ("mente", "mente")]
        + [(s, "idad") for s in _ES_S1_IDAD]
        + [(s, "iva") for s in _ES_S1_IVA]
    )
    match = None
    for s, tag in all_s1:
        if word.endswith(s) and (match is None or len(s) > len(match[0])):
            match = (s, tag)
    if match:
        s, tag = match
        if tag == "del" and _suffix_in(word, s, r2):
            word = word[: -len(s)]
            step1_removed = True
        elif tag == "ador" and _suffix_in(word, s, r2):
            word = word[: -len(s)]
            step1_removed = True
            if _suffix_in(word, "ic", r2):
                word = word[:-2]
        elif tag == "logia" and _suffix_in(word, s, r2):
            word = word[: -len(s)] + "log"
            step1_removed = True
        elif tag == "ucion" and _suffix_in(word, s, r2):
            word = word[: -len(s)] + "u"
            step1_removed = True
        elif tag == "encia" and _suffix_in(word, s, r2):
            word = word[: -len(s)] + "ente"
            step1_removed = True
        elif tag == "amente" and _suffix_in(word, s, r1):
            word = word[: -len(s)]
            step1_removed = True
            if _suffix_in(word, "iv", r2):
                word = word[:-2]
                if _suffix_in(word, "at", r2):
                    word = word[:-2]
            else:
                pre = _longest_in(word, ("os", "ic", "ad"), r2)
                if pre:
                    word = word[: -len(pre)]
        elif tag == "mente" and _suffix_in(word, s, r2):
            word = word[: -len(s)]
            step1_removed = True
            pre = _longest_in(word, _ES_S1_MENTE_PRE, r2)
            if pre:
                word = word[: -len(pre)]
        elif tag == "idad" and _suffix_in(word, s, r2):
            word = word[: -len(s)]
            step1_removed = True
            pre = _longest_in(word, _ES_S1_IDAD_PRE, r2)
            if pre:
                word = word[: -len(pre)]
        elif tag == "iva" and _suffix_in(word, s, r2):
            word = word[: -len(s)]
            step1_removed = True
            if _suffix_in(word, "at", r2):
                word = word[:-2]

    # step 2a/2b: verb suffixes, only when step 1 removed nothing
    if not step1_removed:
        removed_2a = False
        s2a = _longest_in(word, _ES_STEP2A, rv)
        if s2a and len(word) > len(s2a) and word[-len(s2a) - 1] == "u":
            word = word[: -len(s2a)]
            removed_2a = True
        if not removed_2a:
            s2b = _longest_in(word, _ES_STEP2B_GU + _ES_STEP2B_PLAIN, rv)
            if s2b:
                word = word[: -len(s2b)]
                if s2b in _ES_STEP2B_GU and word.endswith("gu"):
                    word = word[:-1]

    # step 3: residual suffix
    s3 = _longest_in(word, _ES_STEP3_DEL + ("e", "é"), rv)
    if s3 in ("e", "é"):
        word = word[:-1]
        if word.endswith("gu") and _suffix_in(word, "u", rv):
            word = word[:-1]
    elif s3 is not None:
        word = word[: -len(s3)]

    return word.translate(_ES_ACCENT_MAP)


# ---------------------------------------------------------------------------
# Porter English stemmer (the classic 1980 algorithm)
# ---------------------------------------------------------------------------

def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in "aeiou":
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        v = not _is_cons(stem, i)
        if not v and prev_vowel:
            m += 1
        prev_vowel = v
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_cons(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if not (_is_cons(word, len(word) - 3)
            and not _is_cons(word, len(word) - 2)
            and _is_cons(word, len(word) - 1)):
        return False
    return word[-1] not in "wxy"


_PORTER_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
)
_PORTER_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)
_PORTER_STEP4 = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


def porter_stem(word: str) -> str:
    word = word.lower()
    if len(word) <= 2:
        return word

    # step 1a
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif not word.endswith("ss") and word.endswith("s"):
        word = word[:-1]

    # step 1b
    fix = False
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            word = word[:-1]
    elif word.endswith("ed") and _has_vowel(word[:-2]):
        word = word[:-2]
        fix = True
    elif word.endswith("ing") and _has_vowel(word[:-3]):
        word = word[:-3]
        fix = True
    if fix:
        if word.endswith(("at", "bl", "iz")):
            word += "e"
        elif _ends_double_cons(word) and word[-1] not in "lsz":
            word = word[:-1]
        elif _measure(word) == 1 and _ends_cvc(word):
            word += "e"

    # step 1c
    if word.endswith("y") and _has_vowel(word[:-1]):
        word = word[:-1] + "i"

    # steps 2 and 3
    for table in (_PORTER_STEP2, _PORTER_STEP3):
        for suffix, repl in table:
            if word.endswith(suffix):
                stem = word[: -len(suffix)]
                if _measure(stem) > 0:
                    word = stem + repl
                break

    # step 4
    for suffix in _PORTER_STEP4:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > 1:
                word = stem
            break
    else:
        if word.endswith("ion") and len(word) > 3 and word[-4] in "st":
            if _measure(word[:-3]) > 1:
                word = word[:-3]

    # step 5a
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem

    # step 5b
    if _measure(word) > 1 and word.endswith("ll"):
        word = word[:-1]

    return word


STEMMERS: dict[str, Stemmer] = {
    "spanish": spanish_stem,
    "english": porter_stem,
    "none": lambda w: w,
}


def get_stemmer(name: str) -> Stemmer:
    try:
        return STEMMERS[name]
    except KeyError:
        raise UnknownStemmerError(
            f"unknown stemmer {name!r}; available: {', '.join(sorted(STEMMERS))}"
        ) from None
