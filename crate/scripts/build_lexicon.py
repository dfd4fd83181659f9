#!/usr/bin/env python3
"""Regenerate crates/core/resources/lexicon.tsv.

Source data: the Brill tagger lexicon and the word-frequency list shipped in
the TextBlob wheel (textblob/en/en-lexicon.txt, textblob/en/en-spelling.txt).

    pip download textblob --no-deps -d /tmp/tb
    python3 scripts/build_lexicon.py /tmp/tb/textblob-*.whl > crates/core/resources/lexicon.tsv
"""
import sys
import zipfile

PENN = set(
    "CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB RBR RBS "
    "RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB".split()
)
CLOSED = set("CC DT EX IN MD PDT POS PRP PRP$ RP TO WDT WP WP$ WRB".split())
OPEN_LIMIT = 5000
# Majority tags that never get an extra VB reading.
NO_VERB_TAGS = set("CD UH RB RBR RBS JJR JJS NNP NNPS FW".split())
NOT_VERBS = {"am", "are", "is", "was", "were", "been", "being", "has", "had", "does", "did"}

# Programming vocabulary that is rare in general English text but common in
# source comments. Each entry: word -> tags, majority first.
SUPPLEMENT = {
    **{w: ["VB"] for w in (
        "update updates init initialize reset allocate deallocate parse render fetch invoke "
        "instantiate serialize deserialize validate normalize flush append prepend iterate "
        "compute calculate convert encode decode dispatch register unregister refresh "
        "notify retry rethrow throw ignore skip override implement configure cleanup "
        "populate resize truncate sanitize escape unescape cache recalculate load unload "
        "reload insert delete remove sort filter map reduce swap toggle mark unmark emit "
        "log print wrap unwrap lookup merge split join trim strip bind unbind lock unlock "
        "release acquire spawn schedule enqueue dequeue push pop shift assert verify "
        "ensure handle process compare clone copy clear close open read write send "
        "receive connect disconnect start stop wait sleep exit abort cancel commit "
        "rollback save store restore create destroy build rebuild generate check set get"
    ).split()},
    **{w: ["NN"] for w in (
        "buffer array index cache config callback param parameter listener handler null "
        "boolean string integer int float char byte bytes pointer iterator thread mutex "
        "socket stream exception error timeout offset length width height size node tree "
        "queue stack list map hash key value entry file path directory dir url uri id "
        "json xml http api utf encoding bitmap pixel cursor token parser lexer compiler "
        "runtime loop flag counter default fallback constructor destructor getter setter "
        "variable constant method function class interface object instance field attribute "
        "property argument input output result response request payload header body "
        "metadata checksum timestamp username password database db query table column row "
        "todo fixme hack workaround"
    ).split()},
}


def main(wheel):
    z = zipfile.ZipFile(wheel)
    lex_lines = z.read("textblob/en/en-lexicon.txt").decode("utf-8").splitlines()
    freq_lines = z.read("textblob/en/en-spelling.txt").decode("utf-8").splitlines()

    lexicon = {}
    for line in lex_lines:
        if line.startswith(";;;") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        tag = tag.split("|")[0]
        if tag not in PENN or word != word.lower() or not word.isalpha():
            continue
        lexicon.setdefault(word, tag)

    freq = {}
    for line in freq_lines:
        if line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) == 2 and parts[1].isdigit():
            freq[parts[0].lower()] = freq.get(parts[0].lower(), 0) + int(parts[1])

    closed = sorted(w for w, t in lexicon.items() if t in CLOSED and freq.get(w, 0) > 0)
    open_words = [w for w, t in lexicon.items() if t not in CLOSED and w in freq]
    open_words.sort(key=lambda w: (-freq[w], w))
    open_words = open_words[:OPEN_LIMIT]

    supplement_verbs = {w for w, tags in SUPPLEMENT.items() if "VB" in tags}
    supplement_nouns = {w for w, tags in SUPPLEMENT.items() if "NN" in tags}

    def verb_capable(w):
        if w in NOT_VERBS or lexicon.get(w) in NO_VERB_TAGS:
            return False
        if w in supplement_verbs or lexicon.get(w) in ("VB", "VBP"):
            return True
        forms = [w + "ing"]
        if len(w) > 3:
            forms.append(w + "ed")
        if w.endswith("e"):
            forms += [w + "d", w[:-1] + "ing"]
        if w.endswith("y"):
            forms.append(w[:-1] + "ied")
        if len(w) > 2:
            forms += [w + w[-1] + "ed", w + w[-1] + "ing"]
        return any(lexicon.get(f) in ("VBD", "VBN", "VBG") for f in forms)

    chosen = set(open_words) | set(closed)
    for w, tags in SUPPLEMENT.items():
        lexicon.setdefault(w, tags[0])
        if w not in chosen:
            open_words.append(w)
    open_words = sorted(set(open_words))

    out = sys.stdout
    out.write("# Part-of-speech lexicon: word<TAB>TAG, majority tag first.\n")
    out.write("# Derived from the Brill tagger lexicon (Copyright 1993 by the Massachusetts\n")
    out.write("# Institute of Technology and the University of Pennsylvania, MIT license)\n")
    out.write("# as redistributed with TextBlob, filtered by word frequency.\n")
    for w in closed:
        out.write(f"{w}\t{lexicon[w]}\n")
    for w in sorted(open_words):
        tag = lexicon[w]
        out.write(f"{w}\t{tag}\n")
        inflected = tag in ("VBD", "VBG", "VBN", "VBZ")
        if tag != "VB" and verb_capable(w) and (not inflected or w in supplement_verbs):
            out.write(f"{w}\tVB\n")
        if tag != "NN" and w in supplement_nouns:
            out.write(f"{w}\tNN\n")


if __name__ == "__main__":
    main(sys.argv[1])
