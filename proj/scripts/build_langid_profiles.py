#!/usr/bin/env python3
"""Builds the Latin language profiles and the labeled snippet corpus.

Inputs:  data/tables/default_tables.json, data/tables/names.json, plus the
inline word lists below.  Outputs:

  data/langid/en.json / de.json / es.json   frequency profiles
  data/langid/snippets.jsonl                labeled evaluation snippets

Profile scoring in the library is
    3 * marker hits + 2 * stopword hits + mean trigram log-frequency
over case-folded text with non-Latin characters mapped to space (see
trigram_normalize in src/langid.cpp — the normalization here must match).

Snippets are labeled by construction: Latin fragments are sliding 3..6-token
windows of rendered template texts that keep at least two tokens which are
neither names nor digits; non-Latin snippets are rendered answers with
names, digits and punctuation stripped, hence single-script.

Run from the repository root:  python3 scripts/build_langid_profiles.py
"""

import json
import math
import re
import unicodedata

TABLES = "data/tables/default_tables.json"
NAMES = "data/tables/names.json"
OUT_DIR = "data/langid"

LATIN = ["en", "de", "es"]
NON_LATIN = ["zh", "ru", "ko", "hi", "th"]

MARKERS = {
    "en": {},
    "de": {"ä": 1.0, "ö": 1.0, "ü": 1.0, "ß": 1.0},
    "es": {"ñ": 1.0, "¿": 1.0, "¡": 1.0, "á": 1.0, "é": 1.0, "í": 1.0,
           "ó": 1.0, "ú": 1.0},
}

STOPWORDS = {
    "en": """the of and a an to in is are was were that it for on with as at
             by from this be or not no what when where which who whose how
             does do did done has have had he she they his her their its""",
    "de": """der die das den dem des ein eine einen einem einer und oder
             nicht ist sind war waren wird wurde wurden werden hat haben
             hatte als auch auf aus bei mit nach von vor zu zum zur für über
             unter durch gegen ohne um an am im in welche welcher welchen
             welchem welches wann wo wie wer was sich sein seine ihr ihre es
             er sie man dass wenn""",
    "es": """el la los las un una unos unas de del y o no es son era fue
             está están que qué cuál cuáles cuándo dónde cómo quién a al en
             con por para se su sus lo le les más como pero si sí este esta
             estos estas ese esa""",
}

# Small general-vocabulary corpus per Latin language, so the detector is not
# tuned exclusively to the template domain.
GENERAL = {
    "en": """The weather is very nice today and the sun is shining.
             She walked to the market and bought fresh bread and milk.
             Many people enjoy reading books in the evening after work.
             The train arrives at the station every morning at eight.
             He could not remember where he had left his keys.
             Children play football in the park near the old bridge.
             We visited the museum and learned about ancient history.
             Please close the window because it is getting cold outside.
             The meeting was moved to Thursday afternoon next week.
             A good breakfast makes the whole day feel much better.
             They traveled across the country by car last summer.
             The library opens early and closes late during the week.""",
    "de": """Das Wetter ist heute sehr schön und die Sonne scheint hell.
             Sie ging zum Markt und kaufte frisches Brot und Milch.
             Viele Menschen lesen abends nach der Arbeit gerne Bücher.
             Der Zug kommt jeden Morgen um acht Uhr am Bahnhof an.
             Er konnte sich nicht erinnern, wo er seine Schlüssel gelassen hatte.
             Kinder spielen Fußball im Park neben der alten Brücke.
             Wir besuchten das Museum und lernten viel über alte Geschichte.
             Bitte schließe das Fenster, weil es draußen kalt wird.
             Die Besprechung wurde auf Donnerstagnachmittag verschoben.
             Ein gutes Frühstück macht den ganzen Tag viel besser.
             Sie reisten letzten Sommer mit dem Auto durch das Land.
             Die Bibliothek öffnet früh und schließt spät unter der Woche.""",
    "es": """El clima está muy agradable hoy y el sol brilla con fuerza.
             Ella caminó al mercado y compró pan fresco y leche.
             Muchas personas disfrutan leer libros por la noche después del trabajo.
             El tren llega a la estación todas las mañanas a las ocho.
             Él no podía recordar dónde había dejado sus llaves.
             Los niños juegan al fútbol en el parque cerca del puente viejo.
             Visitamos el museo y aprendimos sobre la historia antigua.
             Por favor cierra la ventana porque afuera hace frío.
             La reunión fue movida al jueves por la tarde de la próxima semana.
             Un buen desayuno hace que todo el día sea mucho mejor.
             Viajaron por el país en coche el verano pasado.
             La biblioteca abre temprano y cierra tarde durante la semana.""",
}

SAMPLE_BIRTHDAYS = ["1957-04-12", "1968-11-30", "1975-07-09", "1983-01-24",
                    "1990-06-17", "2002-09-05"]


def is_latin_letter(ch):
    cp = ord(ch)
    if (65 <= cp <= 90) or (97 <= cp <= 122):
        return True
    if 0xC0 <= cp <= 0xFF and cp not in (0xD7, 0xF7):
        return True
    return 0x100 <= cp <= 0x24F or 0x1E00 <= cp <= 0x1EFF


def trigram_normalize(text):
    text = unicodedata.normalize("NFC", text).lower()
    out = []
    pending = True
    for ch in text:
        if is_latin_letter(ch):
            if pending:
                out.append(" ")
                pending = False
            out.append(ch)
        else:
            pending = True
    if not out:
        return ""
    out.append(" ")
    return "".join(out)


def trigram_counts(text, counts):
    norm = trigram_normalize(text)
    for i in range(len(norm) - 2):
        counts[norm[i:i + 3]] = counts.get(norm[i:i + 3], 0) + 1


def render_all(tables, names, lang):
    """Every pool value appears at least once, names cycle."""
    texts = []
    for attr, cells in tables["templates"].items():
        tmpl = cells[lang]
        if attr == "birthday":
            values = SAMPLE_BIRTHDAYS
        else:
            values = tables["pools"][attr][lang]
        for i, value in enumerate(values):
            name = names[i % 20]
            texts.append(tmpl["q"].replace("{name}", name))
            texts.append(tmpl["a"].replace("{name}", name)
                         .replace("{value}", value))
    return texts


def word_tokens(text):
    return re.findall(r"[^\s]+", text)


def strip_punct(token):
    return token.strip(".,;:!?¿¡()\"'«»—-–")


def main():
    tables = json.load(open(TABLES, encoding="utf-8"))
    names = json.load(open(NAMES, encoding="utf-8"))
    name_words = set()
    for name in names:
        for w in name.split():
            name_words.add(w.lower())

    # ---- profiles --------------------------------------------------------
    lang_counts = {}
    for lang in LATIN:
        counts = {}
        for text in render_all(tables, names, lang):
            trigram_counts(text, counts)
        for line in GENERAL[lang].splitlines():
            trigram_counts(line.strip(), counts)
        # Name text appears in every profile with equal weight so that name
        # trigrams do not pull toward any one language.
        for name in names:
            trigram_counts(name, counts)
        lang_counts[lang] = counts

    # One shared floor: text unseen by every profile must tie, so the fixed
    # en < de < es order decides instead of corpus-size noise.
    floor = round(math.log(0.5 / max(sum(c.values())
                                     for c in lang_counts.values())), 4)

    for lang in LATIN:
        counts = lang_counts[lang]
        total = sum(counts.values())
        kept = {t: c for t, c in counts.items() if c >= 2}
        trigrams = {t: round(math.log(c / total), 4)
                    for t, c in sorted(kept.items())}

        profile = {
            "language": lang,
            "version": 1,
            "markers": MARKERS[lang],
            "stopwords": {w: 1.0 for w in sorted(STOPWORDS[lang].split())},
            "trigram_floor": floor,
            "trigrams": trigrams,
        }
        path = f"{OUT_DIR}/{lang}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(profile, fh, ensure_ascii=False, indent=1)
            fh.write("\n")
        print(f"{path}: {len(trigrams)} trigrams (floor {floor})")

    # ---- labeled snippets ------------------------------------------------
    snippets = []
    for lang in LATIN:
        seen = set()
        fragments = []
        for text in render_all(tables, names, lang):
            tokens = [strip_punct(t) for t in word_tokens(text)]
            tokens = [t for t in tokens if t]
            for n in (3, 4, 5, 6):
                for i in range(len(tokens) - n + 1):
                    window = tokens[i:i + n]
                    lexical = [t for t in window
                               if t.lower() not in name_words
                               and not re.fullmatch(r"[\d-]+", t)]
                    if len(lexical) < 2:
                        continue
                    fragment = " ".join(window)
                    if fragment in seen:
                        continue
                    seen.add(fragment)
                    fragments.append({"lang": lang, "text": fragment,
                                      "tokens": n})
        fragments.sort(key=lambda s: (s["tokens"], s["text"]))
        # Deterministic thinning to a manageable corpus size.
        step = max(1, len(fragments) // 250)
        kept = fragments[::step][:250]
        print(f"snippets {lang}: {len(kept)} of {len(fragments)}")
        snippets.extend(kept)

    for lang in NON_LATIN:
        seen = set()
        kept = []
        for text in render_all(tables, names, lang):
            stripped = []
            for ch in text:
                if ch.isspace():
                    stripped.append(ch)
                elif is_latin_letter(ch) or ch.isdigit() or ord(ch) < 0x80:
                    continue
                elif unicodedata.category(ch).startswith(("P", "S")):
                    continue
                else:
                    stripped.append(ch)
            snippet = re.sub(r"\s+", " ", "".join(stripped)).strip()
            if len(snippet) < 2 or snippet in seen:
                continue
            seen.add(snippet)
            kept.append({"lang": lang, "text": snippet, "tokens": 0})
            if len(kept) >= 60:
                break
        print(f"snippets {lang}: {len(kept)}")
        snippets.extend(kept)

    with open(f"{OUT_DIR}/snippets.jsonl", "w", encoding="utf-8") as fh:
        for s in snippets:
            fh.write(json.dumps(s, ensure_ascii=False) + "\n")
    print(f"{OUT_DIR}/snippets.jsonl: {len(snippets)} snippets")


if __name__ == "__main__":
    main()
