#!/usr/bin/env python3
"""Writes the synthetic .cupt fixtures used by the tests.

Output is deterministic; rerun after editing and commit the results:

    python3 tests/data/generate_fixtures.py tests/data
"""

import itertools
import random
import sys
from collections import Counter, defaultdict
from pathlib import Path

COLUMNS = "# global.columns = ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC PARSEME:MWE"

V_PRES = "Mood=Ind|Number=Sing|Person=3|Tense=Pres|VerbForm=Fin"
V_IMP = "Mood=Ind|Number=Sing|Person=3|Tense=Imp|VerbForm=Fin"
V_PART = "Gender=Masc|Number=Sing|Tense=Past|VerbForm=Part"
V_INF = "VerbForm=Inf"
N_FS = "Gender=Fem|Number=Sing"
N_FP = "Gender=Fem|Number=Plur"
N_MS = "Gender=Masc|Number=Sing"
N_MP = "Gender=Masc|Number=Plur"
D_IND_F = "Definite=Ind|Gender=Fem|Number=Sing|PronType=Art"
D_DEF_F = "Definite=Def|Gender=Fem|Number=Sing|PronType=Art"
D_DEF_M = "Definite=Def|Gender=Masc|Number=Sing|PronType=Art"
D_DEF_P = "Definite=Def|Number=Plur|PronType=Art"
D_IND_P = "Definite=Ind|Number=Plur|PronType=Art"
REFL = "Person=3|PronType=Prs|Reflex=Yes"

SUBJECTS = [
    ("Il", "il", "PRON", "Gender=Masc|Number=Sing|Person=3|PronType=Prs"),
    ("Elle", "elle", "PRON", "Gender=Fem|Number=Sing|Person=3|PronType=Prs"),
    ("Paul", "Paul", "PROPN", "_"),
    ("Marie", "Marie", "PROPN", "_"),
    ("Jeanne", "Jeanne", "PROPN", "_"),
    ("On", "on", "PRON", "Number=Sing|Person=3|PronType=Ind"),
]


def T(form, lemma, upos, feats, head, deprel):
    return (form, lemma, upos, feats, head, deprel)


def subj(s, head):
    return T(s[0], s[1], s[2], s[3], head, "nsubj")


class Sent:
    def __init__(self, tokens, mwes=(), ranges=(), empty=(), parsed=True):
        self.tokens = tokens
        self.mwes = list(mwes)  # (ids, category)
        self.ranges = dict(ranges)  # first id -> (last id, form)
        self.empty = dict(empty)  # after id -> (form, lemma, upos, deps)
        self.parsed = parsed


def render(sent, sent_id, columns=11, annotated=True, first=False):
    lines = []
    if first and columns == 11:
        lines.append(COLUMNS)
    lines.append(f"# source_sent_id = . . {sent_id}")
    words, i = [], 1
    while i <= len(sent.tokens):
        if i in sent.ranges:
            last, rform = sent.ranges[i]
            words.append(rform)
            i = last + 1
        else:
            words.append(sent.tokens[i - 1][0])
            i += 1
    lines.append("# text = " + " ".join(words))
    codes = defaultdict(list)
    for n, (ids, cat) in enumerate(sent.mwes, 1):
        for i, tid in enumerate(sorted(ids)):
            codes[tid].append(f"{n}:{cat}" if i == 0 else str(n))
    for i, (form, lemma, upos, feats, head, deprel) in enumerate(sent.tokens, 1):
        if i in sent.ranges:
            last, rform = sent.ranges[i]
            row = [f"{i}-{last}", rform] + ["_"] * 8
            if columns == 11:
                row.append("*")
            lines.append("\t".join(row))
        h = str(head) if sent.parsed else "_"
        d = deprel if sent.parsed else "_"
        row = [str(i), form, lemma, upos, "_", feats, h, d, "_", "_"]
        if columns == 11:
            row.append(";".join(codes[i]) if annotated and codes[i] else ("*" if annotated else "_"))
        lines.append("\t".join(row))
        if i in sent.empty:
            eform, elemma, eupos, deps = sent.empty[i]
            row = [f"{i}.1", eform, elemma, eupos, "_", "_", "_", "_", deps, "_"]
            if columns == 11:
                row.append("*")
            lines.append("\t".join(row))
    return "\n".join(lines) + "\n\n"


# ---------------------------------------------------------------------------
# Training material

def lvc_prendre_0(s):  # S prend une décision .
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 4, "det"), T("décision", "décision", "NOUN", N_FS, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "LVC.full")])


def lvc_prendre_1(s):  # S prend une grande décision .
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 5, "det"), T("grande", "grand", "ADJ", N_FS, 5, "amod"),
                 T("décision", "décision", "NOUN", N_FS, 2, "obj"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 5), "LVC.full")])


def lvc_prendre_2(s):  # S a pris la décision de partir .
    return Sent([subj(s, 3), T("a", "avoir", "AUX", V_PRES, 3, "aux"),
                 T("pris", "prendre", "VERB", V_PART, 0, "root"), T("la", "le", "DET", D_DEF_F, 5, "det"),
                 T("décision", "décision", "NOUN", N_FS, 3, "obj"), T("de", "de", "ADP", "_", 7, "mark"),
                 T("partir", "partir", "VERB", V_INF, 5, "acl"), T(".", ".", "PUNCT", "_", 3, "punct")],
                [((3, 5), "LVC.full")])


def irv_souvenir_0(s):  # S se souvient de Jean .
    return Sent([subj(s, 3), T("se", "se", "PRON", REFL, 3, "expl:pv"),
                 T("souvient", "souvenir", "VERB", V_PRES, 0, "root"), T("de", "de", "ADP", "_", 5, "case"),
                 T("Jean", "Jean", "PROPN", "_", 3, "obl:arg"), T(".", ".", "PUNCT", "_", 3, "punct")],
                [((2, 3), "IRV")])


def irv_souvenir_1(s):  # S s' en souvient .
    return Sent([subj(s, 4), T("s'", "se", "PRON", REFL, 4, "expl:pv"),
                 T("en", "en", "PRON", "Person=3|PronType=Prs", 4, "iobj"),
                 T("souvient", "souvenir", "VERB", V_IMP, 0, "root"), T(".", ".", "PUNCT", "_", 4, "punct")],
                [((2, 4), "IRV")])


def vid_casser_0(s):  # S casse les pieds à Jean .
    return Sent([subj(s, 2), T("casse", "casser", "VERB", V_PRES, 0, "root"),
                 T("les", "le", "DET", D_DEF_P, 4, "det"), T("pieds", "pied", "NOUN", N_MP, 2, "obj"),
                 T("à", "à", "ADP", "_", 6, "case"), T("Jean", "Jean", "PROPN", "_", 2, "obl"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "VID")])


def vid_casser_1(s):  # S nous casse les pieds .
    return Sent([subj(s, 3), T("nous", "nous", "PRON", "Number=Plur|Person=1|PronType=Prs", 3, "iobj"),
                 T("casse", "casser", "VERB", V_IMP, 0, "root"), T("les", "le", "DET", D_DEF_P, 5, "det"),
                 T("pieds", "pied", "NOUN", N_MP, 3, "obj"), T(".", ".", "PUNCT", "_", 3, "punct")],
                [((3, 5), "VID")])


def lit_casser(s):  # S se casse le pied .
    return Sent([subj(s, 3), T("se", "se", "PRON", REFL, 3, "iobj"),
                 T("casse", "casser", "VERB", V_PRES, 0, "root"), T("le", "le", "DET", D_DEF_M, 5, "det"),
                 T("pied", "pied", "NOUN", N_MS, 3, "obj"), T(".", ".", "PUNCT", "_", 3, "punct")])


def mvc_faire(s):  # S fait savoir sa décision .
    return Sent([subj(s, 2), T("fait", "faire", "VERB", V_PRES, 0, "root"),
                 T("savoir", "savoir", "VERB", V_INF, 2, "xcomp"),
                 T("sa", "son", "DET", "Gender=Fem|Number=Sing|Poss=Yes|PronType=Prs", 5, "det"),
                 T("décision", "décision", "NOUN", N_FS, 3, "obj"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 3), "MVC")])


def vid_mettre_0(s):  # S met la question sur la table .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("question", "question", "NOUN", N_FS, 2, "obj"),
                 T("sur", "sur", "ADP", "_", 7, "case"), T("la", "le", "DET", D_DEF_F, 7, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obl:arg"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 5, 7), "VID")])


def vid_mettre_1(s):  # S met tout sur la table .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_IMP, 0, "root"),
                 T("tout", "tout", "PRON", "Gender=Masc|Number=Sing|PronType=Ind", 2, "obj"),
                 T("sur", "sur", "ADP", "_", 6, "case"), T("la", "le", "DET", D_DEF_F, 6, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obl:arg"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 4, 6), "VID")])


def lit_mettre(s):  # S met le livre sur la table .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("le", "le", "DET", D_DEF_M, 4, "det"), T("livre", "livre", "NOUN", N_MS, 2, "obj"),
                 T("sur", "sur", "ADP", "_", 7, "case"), T("la", "le", "DET", D_DEF_F, 7, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obl:mod"), T(".", ".", "PUNCT", "_", 2, "punct")])


def vid_avoir(s):  # La réunion a lieu demain .
    return Sent([T("La", "le", "DET", D_DEF_F, 2, "det"), T("réunion", "réunion", "NOUN", N_FS, 3, "nsubj"),
                 T("a", "avoir", "VERB", V_PRES, 0, "root"), T("lieu", "lieu", "NOUN", N_MS, 3, "obj"),
                 T("demain", "demain", "ADV", "_", 3, "advmod"), T(".", ".", "PUNCT", "_", 3, "punct")],
                [((3, 4), "VID")])


def vid_porte(s):  # S prend la porte .  (annotated once: seen but below min_count)
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("porte", "porte", "NOUN", N_FS, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "VID")])


def filler_0(s):  # S lit un livre au jardin .
    return Sent([subj(s, 2), T("lit", "lire", "VERB", V_PRES, 0, "root"),
                 T("un", "un", "DET", "Definite=Ind|Gender=Masc|Number=Sing|PronType=Art", 4, "det"),
                 T("livre", "livre", "NOUN", N_MS, 2, "obj"), T("à", "à", "ADP", "_", 7, "case"),
                 T("le", "le", "DET", D_DEF_M, 7, "det"), T("jardin", "jardin", "NOUN", N_MS, 2, "obl:mod"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], ranges={5: (6, "au")})


def filler_1(s):  # S regarde les nuages .
    return Sent([subj(s, 2), T("regarde", "regarder", "VERB", V_PRES, 0, "root"),
                 T("les", "le", "DET", D_DEF_P, 4, "det"), T("nuages", "nuage", "NOUN", N_MP, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")])


def filler_2(s):  # S mange et S boit .  (with an empty node)
    return Sent([subj(s, 2), T("mange", "manger", "VERB", V_PRES, 0, "root"),
                 T("et", "et", "CCONJ", "_", 4, "cc"), T("boit", "boire", "VERB", V_PRES, 2, "conj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], empty={4: ("boit", "boire", "VERB", "2:conj")})


TRAIN_PLAN = (
    [lvc_prendre_0] * 4 + [lvc_prendre_1] * 4 + [lvc_prendre_2] * 4 + [irv_souvenir_0] * 5 + [irv_souvenir_1] * 3
    + [vid_casser_0] * 3 + [vid_casser_1] * 2 + [lit_casser] * 3 + [mvc_faire] * 5 + [vid_mettre_0] * 3
    + [vid_mettre_1] * 3 + [lit_mettre] * 2 + [vid_avoir] * 5 + [vid_porte] * 1
    + [filler_0] * 5 + [filler_1] * 4 + [filler_2] * 4
)
assert len(TRAIN_PLAN) == 60


def vid_page(s):  # S tourne la page .  (never seen in training)
    return Sent([subj(s, 2), T("tourne", "tourner", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("page", "page", "NOUN", N_FS, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "VID")])


def lvc_prendre_plural(s):  # S prend des décisions .  (seen lemmas, new surface form)
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("des", "un", "DET", D_IND_P, 4, "det"), T("décisions", "décision", "NOUN", N_FP, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "LVC.full")])


def lvc_prendre_far(s):  # S prend une très grande décision .  (too many insertions)
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 6, "det"), T("très", "très", "ADV", "_", 5, "advmod"),
                 T("grande", "grand", "ADJ", N_FS, 6, "amod"), T("décision", "décision", "NOUN", N_FS, 2, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 6), "LVC.full")])


TEST_PLAN = (
    [lvc_prendre_0, lvc_prendre_1, lvc_prendre_2, lvc_prendre_plural, lvc_prendre_far] * 2
    + [irv_souvenir_0, irv_souvenir_1] * 2 + [vid_casser_0, vid_casser_1, lit_casser] + [mvc_faire] * 2
    + [vid_mettre_0, vid_mettre_1, lit_mettre, lit_mettre] + [vid_avoir] * 2 + [vid_porte, vid_page]
    + [filler_0, filler_1, filler_2]
)

UNLABELED_PLAN = (
    [lvc_prendre_0, lvc_prendre_1, lvc_prendre_2] * 3 + [irv_souvenir_0, irv_souvenir_1] * 3
    + [vid_casser_0, lit_casser, mvc_faire, vid_mettre_0, lit_mettre, vid_avoir] * 2
    + [filler_0, filler_1, filler_2] * 3
)


# ---------------------------------------------------------------------------
# Extraction fixture. Each pattern returns the sentence and the candidates a
# careful reading of the extraction rules yields for the training lexicon:
# (component ids, type id, label).

PD = "décision+prendre/NOUN+VERB"
SS = "se+souvenir/PRON+VERB"
CP = "casser+pied/NOUN+VERB"
FS = "faire+savoir/VERB+VERB"
MST = "mettre+sur+table/ADP+NOUN+VERB"
AL = "avoir+lieu/NOUN+VERB"


def x_prend_une(s, s2):
    return lvc_prendre_0(s), [((2, 4), PD, "positive")]


def x_prend_grande(s, s2):
    return lvc_prendre_1(s), [((2, 5), PD, "positive")]


def x_prend_tres(s, s2):  # three insertions, attested maximum is two
    return lvc_prendre_far(s), []


def x_prend_dossier(s, s2):  # S prend le dossier de la décision .
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("le", "le", "DET", D_DEF_M, 4, "det"), T("dossier", "dossier", "NOUN", N_MS, 2, "obj"),
                 T("de", "de", "ADP", "_", 7, "case"), T("la", "le", "DET", D_DEF_F, 7, "det"),
                 T("décision", "décision", "NOUN", N_FS, 4, "nmod"), T(".", ".", "PUNCT", "_", 2, "punct")]), []


def x_relative(s, s2):  # La décision que S prend .  (relative clause, two insertions)
    return Sent([T("La", "le", "DET", D_DEF_F, 2, "det"), T("décision", "décision", "NOUN", N_FS, 0, "root"),
                 T("que", "que", "PRON", "PronType=Rel", 5, "obj"), subj(s, 5),
                 T("prend", "prendre", "VERB", V_PRES, 2, "acl:relcl"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 5), "LVC.full")]), [((2, 5), PD, "positive")]


def _twice(s, s2, mwes):  # S prend une décision et S2 prend une décision .
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 4, "det"), T("décision", "décision", "NOUN", N_FS, 2, "obj"),
                 T("et", "et", "CCONJ", "_", 7, "cc"), subj(s2, 7), T("prend", "prendre", "VERB", V_PRES, 2, "conj"),
                 T("une", "un", "DET", D_IND_F, 9, "det"), T("décision", "décision", "NOUN", N_FS, 7, "obj"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], mwes)


def x_twice_gold(s, s2):  # (4,7) has span 4 and overlaps both span-3 pairs
    return _twice(s, s2, [((2, 4), "LVC.full"), ((7, 9), "LVC.full")]), [
        ((2, 4), PD, "positive"), ((7, 9), PD, "positive")]


def x_twice_literal(s, s2):
    return _twice(s, s2, []), [((2, 4), PD, "negative"), ((7, 9), PD, "negative")]


def x_twice_crossed(s, s2):  # gold on the crossing pair survives overlap resolution
    return _twice(s, s2, [((4, 7), "LVC.full")]), [
        ((2, 4), PD, "negative"), ((4, 7), PD, "positive"), ((7, 9), PD, "negative")]


def x_souvient(s, s2):
    return irv_souvenir_0(s), [((2, 3), SS, "positive")]


def x_en_souvient(s, s2):
    return irv_souvenir_1(s), [((2, 4), SS, "positive")]


def x_rappelle(s, s2):  # S se le rappelle et se souvient .
    return Sent([subj(s, 4), T("se", "se", "PRON", REFL, 4, "iobj"),
                 T("le", "le", "PRON", "Gender=Masc|Number=Sing|Person=3|PronType=Prs", 4, "obj"),
                 T("rappelle", "rappeler", "VERB", V_PRES, 0, "root"), T("et", "et", "CCONJ", "_", 7, "cc"),
                 T("se", "se", "PRON", REFL, 7, "expl:pv"), T("souvient", "souvenir", "VERB", V_PRES, 4, "conj"),
                 T(".", ".", "PUNCT", "_", 4, "punct")], [((6, 7), "IRV")]), [((6, 7), SS, "positive")]


def x_souvenir_noun(s, s2):  # Le souvenir se perd .
    return Sent([T("Le", "le", "DET", D_DEF_M, 2, "det"), T("souvenir", "souvenir", "NOUN", N_MS, 4, "nsubj"),
                 T("se", "se", "PRON", REFL, 4, "expl:pass"), T("perd", "perdre", "VERB", V_PRES, 0, "root"),
                 T(".", ".", "PUNCT", "_", 4, "punct")]), []


def x_casse_pieds(s, s2):
    return vid_casser_0(s), [((2, 4), CP, "positive")]


def x_casse_literal(s, s2):
    return lit_casser(s), [((3, 5), CP, "negative")]


def x_casse_table(s, s2):  # S casse la table du pied .  (four insertions, contraction line)
    return Sent([subj(s, 2), T("casse", "casser", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("table", "table", "NOUN", N_FS, 2, "obj"),
                 T("de", "de", "ADP", "_", 7, "case"), T("le", "le", "DET", D_DEF_M, 7, "det"),
                 T("pied", "pied", "NOUN", N_MS, 2, "obl:mod"), T(".", ".", "PUNCT", "_", 2, "punct")],
                ranges={5: (6, "du")}), []


def x_fait_savoir(s, s2):
    return mvc_faire(s), [((2, 3), FS, "positive")]


def x_fait_sait(s, s2):  # S fait la cuisine et sait tout .
    return Sent([subj(s, 2), T("fait", "faire", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("cuisine", "cuisine", "NOUN", N_FS, 2, "obj"),
                 T("et", "et", "CCONJ", "_", 6, "cc"), T("sait", "savoir", "VERB", V_PRES, 2, "conj"),
                 T("tout", "tout", "PRON", "PronType=Ind", 6, "obj"), T(".", ".", "PUNCT", "_", 2, "punct")]), []


def x_met_question(s, s2):
    return vid_mettre_0(s), [((2, 5, 7), MST, "positive")]


def x_met_livre(s, s2):
    return lit_mettre(s), [((2, 5, 7), MST, "negative")]


def x_met_sur_dossier(s, s2):  # S met sur la table le dossier .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("sur", "sur", "ADP", "_", 5, "case"), T("la", "le", "DET", D_DEF_F, 5, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obl:arg"), T("le", "le", "DET", D_DEF_M, 7, "det"),
                 T("dossier", "dossier", "NOUN", N_MS, 2, "obj"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 3, 5), "VID")]), [((2, 3, 5), MST, "positive")]


def x_met_far(s, s2):  # S met le livre de la table sur la chaise .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("le", "le", "DET", D_DEF_M, 4, "det"), T("livre", "livre", "NOUN", N_MS, 2, "obj"),
                 T("de", "de", "ADP", "_", 7, "case"), T("la", "le", "DET", D_DEF_F, 7, "det"),
                 T("table", "table", "NOUN", N_FS, 4, "nmod"), T("sur", "sur", "ADP", "_", 10, "case"),
                 T("la", "le", "DET", D_DEF_F, 10, "det"), T("chaise", "chaise", "NOUN", N_FS, 2, "obl:mod"),
                 T(".", ".", "PUNCT", "_", 2, "punct")]), []


def x_met_table_sol(s, s2):  # S met la table sur le sol .
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("la", "le", "DET", D_DEF_F, 4, "det"), T("table", "table", "NOUN", N_FS, 2, "obj"),
                 T("sur", "sur", "ADP", "_", 7, "case"), T("le", "le", "DET", D_DEF_M, 7, "det"),
                 T("sol", "sol", "NOUN", N_MS, 2, "obl:mod"), T(".", ".", "PUNCT", "_", 2, "punct")]), [
        ((2, 4, 5), MST, "negative")]


def x_met_two_tables(s, s2):  # S met sur la table la table .  (smaller span wins)
    return Sent([subj(s, 2), T("met", "mettre", "VERB", V_PRES, 0, "root"),
                 T("sur", "sur", "ADP", "_", 5, "case"), T("la", "le", "DET", D_DEF_F, 5, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obl:arg"), T("la", "le", "DET", D_DEF_F, 7, "det"),
                 T("table", "table", "NOUN", N_FS, 2, "obj"), T(".", ".", "PUNCT", "_", 2, "punct")],
                [((2, 3, 5), "VID")]), [((2, 3, 5), MST, "positive")]


def x_a_lieu(s, s2):
    return vid_avoir(s), [((3, 4), AL, "positive")]


def x_un_lieu(s, s2):  # S a un lieu de travail .
    return Sent([subj(s, 2), T("a", "avoir", "VERB", V_PRES, 0, "root"),
                 T("un", "un", "DET", "Definite=Ind|Gender=Masc|Number=Sing|PronType=Art", 4, "det"),
                 T("lieu", "lieu", "NOUN", N_MS, 2, "obj"), T("de", "de", "ADP", "_", 6, "case"),
                 T("travail", "travail", "NOUN", N_MS, 4, "nmod"), T(".", ".", "PUNCT", "_", 2, "punct")]), []


def x_y_a_lieu(s, s2):  # Il y a lieu de partir .  (not annotated)
    return Sent([T("Il", "il", "PRON", "Person=3|PronType=Prs", 3, "expl:subj"),
                 T("y", "y", "PRON", "Person=3|PronType=Prs", 3, "expl:comp"),
                 T("a", "avoir", "VERB", V_PRES, 0, "root"), T("lieu", "lieu", "NOUN", N_MS, 3, "obj"),
                 T("de", "de", "ADP", "_", 6, "mark"), T("partir", "partir", "VERB", V_INF, 4, "acl"),
                 T(".", ".", "PUNCT", "_", 3, "punct")]), [((3, 4), AL, "negative")]


def x_empty_node(s, s2):  # S prend une décision et S2 aussi .  (elided verb as empty node)
    sent = Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 4, "det"), T("décision", "décision", "NOUN", N_FS, 2, "obj"),
                 T("et", "et", "CCONJ", "_", 6, "cc"), subj(s2, 2), T("aussi", "aussi", "ADV", "_", 6, "advmod"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "LVC.full")],
                empty={6: ("prend", "prendre", "VERB", "2:conj")})
    return sent, [((2, 4), PD, "positive")]


def x_unparsed(s, s2):  # no dependency columns: skipped
    sent = lvc_prendre_0(s)
    sent.parsed = False
    return sent, []


def x_disconnected(s, s2):  # S prend copie dossier décision .  (path of length 3)
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("copie", "copie", "NOUN", N_FS, 2, "obj"), T("dossier", "dossier", "NOUN", N_MS, 3, "nmod"),
                 T("décision", "décision", "NOUN", N_FS, 4, "nmod"), T(".", ".", "PUNCT", "_", 2, "punct")]), []


def x_two_types(s, s2):  # S prend une décision et met tout sur la table .
    return Sent([subj(s, 2), T("prend", "prendre", "VERB", V_PRES, 0, "root"),
                 T("une", "un", "DET", D_IND_F, 4, "det"), T("décision", "décision", "NOUN", N_FS, 2, "obj"),
                 T("et", "et", "CCONJ", "_", 6, "cc"), T("met", "mettre", "VERB", V_PRES, 2, "conj"),
                 T("tout", "tout", "PRON", "PronType=Ind", 6, "obj"), T("sur", "sur", "ADP", "_", 10, "case"),
                 T("la", "le", "DET", D_DEF_F, 10, "det"), T("table", "table", "NOUN", N_FS, 6, "obl:arg"),
                 T(".", ".", "PUNCT", "_", 2, "punct")], [((2, 4), "LVC.full"), ((6, 8, 10), "VID")]), [
        ((2, 4), PD, "positive"), ((6, 8, 10), MST, "positive")]


def x_porte(s, s2):  # seen once in training, not a lexicon type
    return vid_porte(s), []


def x_filler(s, s2):
    return filler_1(s), []


EXTRACTION_PLAN = [
    x_prend_une, x_prend_grande, x_prend_tres, x_prend_dossier, x_relative, x_twice_gold, x_twice_literal,
    x_twice_crossed, x_souvient, x_en_souvient, x_rappelle, x_souvenir_noun, x_casse_pieds, x_casse_literal,
    x_casse_table, x_fait_savoir, x_fait_sait, x_met_question, x_met_livre, x_met_sur_dossier, x_met_far,
    x_met_table_sol, x_met_two_tables, x_a_lieu, x_un_lieu, x_y_a_lieu, x_empty_node, x_unparsed,
    x_disconnected, x_two_types, x_porte, x_filler,
]
EXTRACTION_PLAN += EXTRACTION_PLAN[:18]
assert len(EXTRACTION_PLAN) == 50


# ---------------------------------------------------------------------------
# Independent re-derivation, used to double-check the hand-written lists.

FUNCTION_POS = {"ADP", "AUX", "CCONJ", "DET", "PART", "PRON", "SCONJ"}


def lexicon_of(sents):
    groups = defaultdict(list)
    for s in sents:
        if not s.parsed:
            continue
        for ids, _ in s.mwes:
            toks = [s.tokens[i - 1] for i in ids]
            key = (tuple(sorted(t[1] for t in toks)), tuple(sorted(t[2] for t in toks)))
            groups[key].append(max(ids) - min(ids) + 1 - len(ids))
    return {k: max(v) for k, v in groups.items() if len(v) >= 2}


def distance(sent, a, b):
    adj = defaultdict(set)
    for i, t in enumerate(sent.tokens, 1):
        if t[4]:
            adj[i].add(t[4])
            adj[t[4]].add(i)
    seen, frontier, d = {a}, [a], 0
    while frontier:
        if b in frontier:
            return d
        nxt = []
        for n in frontier:
            for m in adj[n]:
                if m not in seen:
                    seen.add(m)
                    nxt.append(m)
        frontier, d = nxt, d + 1
    return None


def rescan(sent, lexicon):
    if not sent.parsed:
        return []
    gold = {tuple(sorted(ids)) for ids, _ in sent.mwes}
    out = []
    for (lemmas, upos), max_ins in sorted(lexicon.items()):
        type_id = "+".join(lemmas) + "/" + "+".join(upos)
        k = len(lemmas)
        kept = []
        for ids in itertools.combinations(range(1, len(sent.tokens) + 1), k):
            toks = [sent.tokens[i - 1] for i in ids]
            if tuple(sorted(t[1] for t in toks)) != lemmas or tuple(sorted(t[2] for t in toks)) != upos:
                continue
            if ids[-1] - ids[0] + 1 - k > max_ins:
                continue
            pos = [t[2] for t in toks]
            pair = None
            if k == 2:
                pair = ids
            elif pos.count("VERB") == 1 and pos.count("NOUN") == 1 and all(
                    p in FUNCTION_POS for p in pos if p not in ("VERB", "NOUN")):
                pair = (ids[pos.index("VERB")], ids[pos.index("NOUN")])
            if pair is not None:
                d = distance(sent, *pair)
                if d is None or d > 2:
                    continue
            kept.append(ids)
        kept.sort(key=lambda ids: (ids[-1] - ids[0], ids))
        used = set()
        for ids in kept:
            if ids not in gold and used & set(ids):
                continue
            used |= set(ids)
            out.append((ids, type_id, "positive" if ids in gold else "negative"))
    return sorted(out)


# ---------------------------------------------------------------------------

def build(plan, rng):
    out = []
    for fn in plan:
        out.append(fn(rng.choice(SUBJECTS)))
    return out


def write_corpus(path, sents, prefix, columns=11, annotated=True):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for n, s in enumerate(sents, 1):
            f.write(render(s, f"{prefix}-{n:03d}", columns, annotated, first=(n == 1)))


def main(outdir):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20180801)

    train = build(TRAIN_PLAN, rng)
    rng.shuffle(train)
    write_corpus(out / "train.cupt", train, "train")

    test = build(TEST_PLAN, rng)
    rng.shuffle(test)
    write_corpus(out / "test.cupt", test, "test")

    unlabeled = build(UNLABELED_PLAN, rng)
    unlabeled[7].parsed = False
    rng.shuffle(unlabeled)
    write_corpus(out / "unlabeled.conllu", unlabeled, "web", columns=10)

    lexicon = lexicon_of(train)
    expected_lines = ["sent_id\ttoken_ids\ttype_id\tlabel"]
    sents = []
    for n, fn in enumerate(EXTRACTION_PLAN, 1):
        s, s2 = SUBJECTS[n % len(SUBJECTS)], SUBJECTS[(n + 3) % len(SUBJECTS)]
        sent, expected = fn(s, s2)
        expected = sorted((tuple(ids), t, l) for ids, t, l in expected)
        derived = rescan(sent, lexicon)
        if derived != expected:
            sys.exit(f"{fn.__name__}: hand-worked {expected} but rescan gives {derived}")
        sid = f"extract-{n:03d}"
        sents.append(sent)
        for ids, t, l in expected:
            expected_lines.append(f"{sid}\t{','.join(map(str, ids))}\t{t}\t{l}")
    write_corpus(out / "extraction.cupt", sents, "extract")
    (out / "extraction_expected.tsv").write_text("\n".join(expected_lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent)
