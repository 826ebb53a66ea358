#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Generate a Penn-tagged training corpus for the bundled POS tagger.

Sentences are produced from caption-like and narrative templates over a
hand-tagged lexicon, so that ambiguous words (rock, park, watch, ...) occur
in both noun and verb positions. Output is one sentence per line as
word/TAG tokens, lowercased and tokenized like the normalizer.

    python3 tools/make_tagger_corpus.py > data/tagger_train.txt
"""

import argparse
import random

NOUNS = [
    ("man", "men"), ("woman", "women"), ("person", "people"), ("child", "children"),
    ("boy", "boys"), ("girl", "girls"), ("dog", "dogs"), ("cat", "cats"),
    ("horse", "horses"), ("cow", "cows"), ("sheep", "sheep"), ("bird", "birds"),
    ("elephant", "elephants"), ("giraffe", "giraffes"), ("zebra", "zebras"), ("bear", "bears"),
    ("train", "trains"), ("station", "stations"), ("bus", "buses"), ("car", "cars"),
    ("truck", "trucks"), ("bike", "bikes"), ("bicycle", "bicycles"), ("motorcycle", "motorcycles"),
    ("boat", "boats"), ("plane", "planes"), ("airplane", "airplanes"), ("kite", "kites"),
    ("street", "streets"), ("road", "roads"), ("table", "tables"), ("chair", "chairs"),
    ("bench", "benches"), ("couch", "couches"), ("bed", "beds"), ("room", "rooms"),
    ("kitchen", "kitchens"), ("field", "fields"), ("grass", "grasses"), ("beach", "beaches"),
    ("ocean", "oceans"), ("water", "waters"), ("wave", "waves"), ("snow", "snows"),
    ("hill", "hills"), ("mountain", "mountains"), ("tree", "trees"), ("sky", "skies"),
    ("park", "parks"), ("pizza", "pizzas"), ("sandwich", "sandwiches"), ("plate", "plates"),
    ("bowl", "bowls"), ("cake", "cakes"), ("banana", "bananas"), ("apple", "apples"),
    ("laptop", "laptops"), ("phone", "phones"), ("computer", "computers"), ("desk", "desks"),
    ("window", "windows"), ("door", "doors"), ("wall", "walls"), ("building", "buildings"),
    ("city", "cities"), ("house", "houses"), ("umbrella", "umbrellas"), ("frisbee", "frisbees"),
    ("ball", "balls"), ("bat", "bats"), ("racket", "rackets"), ("court", "courts"),
    ("game", "games"), ("player", "players"), ("skateboard", "skateboards"), ("surfboard", "surfboards"),
    ("board", "boards"), ("skier", "skiers"), ("surfer", "surfers"), ("shirt", "shirts"),
    ("hat", "hats"), ("tie", "ties"), ("dress", "dresses"), ("sign", "signs"),
    ("light", "lights"), ("clock", "clocks"), ("tower", "towers"), ("toilet", "toilets"),
    ("sink", "sinks"), ("mirror", "mirrors"), ("cup", "cups"), ("bottle", "bottles"),
    ("river", "rivers"), ("lake", "lakes"), ("shore", "shores"), ("rock", "rocks"),
    ("fence", "fences"), ("pole", "poles"), ("corner", "corners"), ("sidewalk", "sidewalks"),
    ("crowd", "crowds"), ("group", "groups"), ("baby", "babies"), ("hand", "hands"),
    ("eye", "eyes"), ("face", "faces"), ("head", "heads"), ("arm", "arms"),
    ("heart", "hearts"), ("voice", "voices"), ("floor", "floors"), ("night", "nights"),
    ("morning", "mornings"), ("day", "days"), ("moment", "moments"), ("smile", "smiles"),
    ("letter", "letters"), ("book", "books"), ("garden", "gardens"), ("flower", "flowers"),
    ("leaf", "leaves"), ("sun", "suns"), ("fire", "fires"), ("puppy", "puppies"),
    ("walk", "walks"), ("watch", "watches"), ("ride", "rides"), ("kiss", "kisses"),
    ("swing", "swings"), ("look", "looks"), ("run", "runs"), ("play", "plays"),
    ("photo", "photos"), ("picture", "pictures"), ("box", "boxes"), ("bag", "bags"),
    ("glass", "glasses"), ("knife", "knives"), ("wolf", "wolves"), ("foot", "feet"),
    ("mouse", "mice"), ("tooth", "teeth"), ("goose", "geese"), ("life", "lives"),
    ("sea", "seas"), ("sand", "sands"), ("path", "paths"), ("lamp", "lamps"),
    ("wind", "winds"), ("rain", "rains"), ("dinner", "dinners"), ("coffee", "coffees"),
    ("meter", "meters"), ("hydrant", "hydrants"), ("stop", "stops"), ("rest", "rests"),
    ("top", "tops"), ("clothes", "clothes"), ("butterfly", "butterflies"), ("meadow", "meadows"),
    ("slope", "slopes"), ("line", "lines"), ("kid", "kids"), ("hair", "hair"), ("side", "sides"), ("front", "fronts"), ("middle", "middles"),
]

# Nouns that also act as the first half of a compound.
COMPOUNDS = [
    ("hot", "JJ", "dog", "dogs"), ("fire", "NN", "hydrant", "hydrants"), ("teddy", "NN", "bear", "bears"),
    ("stop", "NN", "sign", "signs"), ("traffic", "NN", "light", "lights"), ("cell", "NN", "phone", "phones"),
    ("tennis", "NN", "racket", "rackets"), ("ice", "NN", "cream", "creams"), ("parking", "NN", "meter", "meters"),
    ("baseball", "NN", "bat", "bats"), ("living", "NN", "room", "rooms"), ("hair", "NN", "dryer", "dryers"),
    ("dining", "NN", "table", "tables"), ("fire", "NN", "truck", "trucks"), ("train", "NN", "station", "stations"),
]

# base, 3sg, past, past participle, gerund, transitive?
VERBS = [
    ("sit", "sits", "sat", "sat", "sitting", False), ("stand", "stands", "stood", "stood", "standing", False),
    ("hold", "holds", "held", "held", "holding", True), ("ride", "rides", "rode", "ridden", "riding", True),
    ("walk", "walks", "walked", "walked", "walking", False), ("run", "runs", "ran", "run", "running", False),
    ("fly", "flies", "flew", "flown", "flying", True), ("eat", "eats", "ate", "eaten", "eating", True),
    ("play", "plays", "played", "played", "playing", True), ("park", "parks", "parked", "parked", "parking", True),
    ("lay", "lays", "laid", "laid", "laying", True), ("lie", "lies", "lay", "lain", "lying", False),
    ("hang", "hangs", "hung", "hung", "hanging", False), ("lean", "leans", "leaned", "leaned", "leaning", False),
    ("swim", "swims", "swam", "swum", "swimming", False), ("look", "looks", "looked", "looked", "looking", False),
    ("watch", "watches", "watched", "watched", "watching", True),
    ("carry", "carries", "carried", "carried", "carrying", True),
    ("wear", "wears", "wore", "worn", "wearing", True), ("throw", "throws", "threw", "thrown", "throwing", True),
    ("catch", "catches", "caught", "caught", "catching", True),
    ("cross", "crosses", "crossed", "crossed", "crossing", True),
    ("wait", "waits", "waited", "waited", "waiting", False), ("drive", "drives", "drove", "driven", "driving", True),
    ("cut", "cuts", "cut", "cut", "cutting", True), ("smile", "smiles", "smiled", "smiled", "smiling", False),
    ("kneel", "kneels", "knelt", "knelt", "kneeling", False), ("bend", "bends", "bent", "bent", "bending", False),
    ("float", "floats", "floated", "floated", "floating", False), ("go", "goes", "went", "gone", "going", False),
    ("swing", "swings", "swung", "swung", "swinging", True),
    ("bound", "bounds", "bounded", "bounded", "bounding", False),
    ("stroll", "strolls", "strolled", "strolled", "strolling", False),
    ("wander", "wanders", "wandered", "wandered", "wandering", False),
    ("jump", "jumps", "jumped", "jumped", "jumping", False), ("climb", "climbs", "climbed", "climbed", "climbing", True),
    ("place", "places", "placed", "placed", "placing", True), ("put", "puts", "put", "put", "putting", True),
    ("rest", "rests", "rested", "rested", "resting", False), ("fill", "fills", "filled", "filled", "filling", True),
    ("cover", "covers", "covered", "covered", "covering", True), ("cook", "cooks", "cooked", "cooked", "cooking", True),
    ("prepare", "prepares", "prepared", "prepared", "preparing", True),
    ("grab", "grabs", "grabbed", "grabbed", "grabbing", True), ("touch", "touches", "touched", "touched", "touching", True),
    ("kiss", "kisses", "kissed", "kissed", "kissing", True), ("love", "loves", "loved", "loved", "loving", True),
    ("believe", "believes", "believed", "believed", "believing", True),
    ("trust", "trusts", "trusted", "trusted", "trusting", True), ("want", "wants", "wanted", "wanted", "wanting", True),
    ("know", "knows", "knew", "known", "knowing", True), ("think", "thinks", "thought", "thought", "thinking", False),
    ("see", "sees", "saw", "seen", "seeing", True), ("hear", "hears", "heard", "heard", "hearing", True),
    ("feel", "feels", "felt", "felt", "feeling", True), ("say", "says", "said", "said", "saying", False),
    ("tell", "tells", "told", "told", "telling", True), ("laugh", "laughs", "laughed", "laughed", "laughing", False),
    ("cry", "cries", "cried", "cried", "crying", False), ("sleep", "sleeps", "slept", "slept", "sleeping", False),
    ("stare", "stares", "stared", "stared", "staring", False), ("gaze", "gazes", "gazed", "gazed", "gazing", False),
    ("pull", "pulls", "pulled", "pulled", "pulling", True), ("push", "pushes", "pushed", "pushed", "pushing", True),
    ("kick", "kicks", "kicked", "kicked", "kicking", True), ("hit", "hits", "hit", "hit", "hitting", True),
    ("surf", "surfs", "surfed", "surfed", "surfing", False), ("skate", "skates", "skated", "skated", "skating", False),
    ("dance", "dances", "danced", "danced", "dancing", False), ("pose", "poses", "posed", "posed", "posing", False),
    ("graze", "grazes", "grazed", "grazed", "grazing", False), ("chase", "chases", "chased", "chased", "chasing", True),
    ("follow", "follows", "followed", "followed", "following", True), ("move", "moves", "moved", "moved", "moving", False),
    ("roll", "rolls", "rolled", "rolled", "rolling", False), ("drift", "drifts", "drifted", "drifted", "drifting", False),
    ("glide", "glides", "glided", "glided", "gliding", False), ("slide", "slides", "slid", "slid", "sliding", False),
    ("enter", "enters", "entered", "entered", "entering", True), ("leave", "leaves", "left", "left", "leaving", True),
    ("arrive", "arrives", "arrived", "arrived", "arriving", False), ("come", "comes", "came", "come", "coming", False),
    ("rock", "rocks", "rocked", "rocked", "rocking", True), ("dress", "dresses", "dressed", "dressed", "dressing", True),
    ("open", "opens", "opened", "opened", "opening", True), ("turn", "turns", "turned", "turned", "turning", False),
    ("reach", "reaches", "reached", "reached", "reaching", True), ("bring", "brings", "brought", "brought", "bringing", True),
    ("take", "takes", "took", "taken", "taking", True), ("give", "gives", "gave", "given", "giving", True),
    ("talk", "talks", "talked", "talked", "talking", False), ("use", "uses", "used", "used", "using", True),
    ("display", "displays", "displayed", "displayed", "displaying", True),
    ("sell", "sells", "sold", "sold", "selling", True), ("fix", "fixes", "fixed", "fixed", "fixing", True),
    ("read", "reads", "read", "read", "reading", True), ("write", "writes", "wrote", "written", "writing", True),
    ("drink", "drinks", "drank", "drunk", "drinking", True), ("bake", "bakes", "baked", "baked", "baking", True),
    ("feed", "feeds", "fed", "fed", "feeding", True), ("hug", "hugs", "hugged", "hugged", "hugging", True),
    ("stretch", "stretches", "stretched", "stretched", "stretching", False),
    ("pass", "passes", "passed", "passed", "passing", True), ("sail", "sails", "sailed", "sailed", "sailing", False),
    ("lift", "lifts", "lifted", "lifted", "lifting", True), ("whisper", "whispers", "whispered", "whispered", "whispering", False),
    ("shine", "shines", "shone", "shone", "shining", False), ("fall", "falls", "fell", "fallen", "falling", False),
    ("stop", "stops", "stopped", "stopped", "stopping", False), ("hurry", "hurries", "hurried", "hurried", "hurrying", False),
    ("seat", "seats", "seated", "seated", "seating", True), ("crouch", "crouches", "crouched", "crouched", "crouching", False),
    ("perch", "perches", "perched", "perched", "perching", False), ("glance", "glances", "glanced", "glanced", "glancing", False),
    ("train", "trains", "trained", "trained", "training", True), ("light", "lights", "lit", "lit", "lighting", True),
    ("sign", "signs", "signed", "signed", "signing", True), ("board", "boards", "boarded", "boarded", "boarding", True),
    ("wish", "wishes", "wished", "wished", "wishing", True), ("like", "likes", "liked", "liked", "liking", True),
    ("hate", "hates", "hated", "hated", "hating", True), ("need", "needs", "needed", "needed", "needing", True),
    ("remember", "remembers", "remembered", "remembered", "remembering", True),
    ("forget", "forgets", "forgot", "forgotten", "forgetting", True),
    ("find", "finds", "found", "found", "finding", True), ("keep", "keeps", "kept", "kept", "keeping", True),
    ("call", "calls", "called", "called", "calling", True), ("ask", "asks", "asked", "asked", "asking", True),
    ("try", "tries", "tried", "tried", "trying", True), ("smell", "smells", "smelled", "smelled", "smelling", True),
    ("make", "makes", "made", "made", "making", True), ("get", "gets", "got", "gotten", "getting", True),
]

ADJS = ["big", "small", "large", "little", "white", "black", "red", "blue", "green", "yellow", "brown",
        "young", "old", "tall", "fresh", "wet", "dry", "dark", "bright", "empty", "busy", "tiny", "huge",
        "pretty", "beautiful", "cold", "warm", "soft", "quiet", "clean", "dirty", "wooden", "hot", "happy",
        "sad", "long", "short", "grassy", "sandy", "snowy", "crowded", "open", "sure", "gentle", "calm",
        "sweet", "lonely", "strange", "perfect", "wild", "lovely", "broken", "full", "golden", "silver"]
COMPARATIVES = [("bigger", "JJR"), ("smaller", "JJR"), ("older", "JJR"), ("biggest", "JJS"), ("tallest", "JJS")]
ADVS = ["quickly", "slowly", "quietly", "softly", "gently", "together", "away", "then", "now", "still",
        "really", "finally", "suddenly", "carefully", "outside", "always", "never", "often", "again",
        "very", "so", "too", "here", "almost", "just", "only", "once", "forever", "tightly", "happily"]
PREPS = ["on", "in", "at", "near", "with", "by", "under", "over", "through", "across", "behind",
         "beside", "into", "onto", "along", "from", "of", "around", "inside", "toward", "against",
         "past", "for", "about", "above", "below", "between", "beneath", "like", "after", "before"]
DETS = ["a", "the", "the", "a", "this", "that", "each", "every", "some", "another", "no", "any"]
POSS = ["his", "her", "their", "my", "our", "its", "your"]
SUBJ = ["i", "you", "he", "she", "we", "they", "it"]
OBJ = ["me", "you", "him", "her", "us", "them", "it"]
NUMS = ["two", "three", "four", "five", "<num>", "several_"]
MODALS = ["can", "could", "would", "will", "should", "might", "must"]
PARTICLES = ["up", "down", "out", "off", "away", "back"]


def obj_np(rng):
    return det_np(rng, plural=rng.random() < 0.3)


def det_np(rng, allow_adj=True, plural=False):
    toks = []
    if plural:
        if rng.random() < 0.4:
            n = rng.choice(NUMS)
            toks.append((n.rstrip("_"), "JJ" if n.endswith("_") else "CD"))
        elif rng.random() < 0.5:
            toks.append(("the", "DT"))
    else:
        r = rng.random()
        if r < 0.75:
            toks.append((rng.choice(DETS), "DT"))
        else:
            toks.append((rng.choice(POSS), "PRP$"))
    if allow_adj and rng.random() < 0.35:
        toks.append((rng.choice(ADJS), "JJ"))
    if rng.random() < 0.12:
        a, at, s, p = rng.choice(COMPOUNDS)
        toks.append((a, at))
        toks.append((p if plural else s, "NNS" if plural else "NN"))
    else:
        s, p = rng.choice(NOUNS)
        toks.append((p if plural else s, "NNS" if plural else "NN"))
    if toks[0][0] in ("a",) and toks[1][0][0] in "aeiou":
        toks[0] = ("an", "DT")
    return toks


def pp(rng):
    r = rng.random()
    if r < 0.08:
        head = [("next", "JJ"), ("to", "TO")]
    elif r < 0.12:
        head = [("in", "IN"), ("front", "NN"), ("of", "IN")]
    elif r < 0.15:
        head = [("on", "IN"), ("top", "NN"), ("of", "IN")]
    else:
        head = [(rng.choice(PREPS), "IN")]
    return head + det_np(rng, plural=rng.random() < 0.2)


def verb(rng, transitive=None):
    while True:
        v = rng.choice(VERBS)
        if transitive is None or v[5] == transitive:
            return v


def maybe_period(rng, toks, p=0.5):
    if rng.random() < p:
        toks.append((".", "."))
    return toks


def caption(rng):
    k = rng.randrange(14)
    plural = rng.random() < 0.25
    subj = det_np(rng, plural=plural)
    if k == 0:
        v = verb(rng, False)
        toks = subj + [(v[4], "VBG")] + pp(rng)
    elif k == 1:
        v = verb(rng, True)
        toks = subj + [(v[4], "VBG")] + obj_np(rng)
    elif k == 2:
        v = verb(rng)
        aux = ("are", "VBP") if plural else ("is", "VBZ")
        toks = subj + [aux, (v[4], "VBG")] + (det_np(rng) if v[5] else pp(rng))
    elif k == 3:
        v = verb(rng)
        toks = subj + [(v[3], "VBN")] + pp(rng)
    elif k == 4:
        v = verb(rng)
        toks = subj + [(v[2] if plural else v[1], "VBP" if plural else "VBZ")] + pp(rng)
        if plural:
            toks[len(subj)] = (v[0], "VBP")
    elif k == 5:
        v = verb(rng, False)
        toks = subj + [("and", "CC")] + det_np(rng) + [(v[4], "VBG")] + pp(rng)
    elif k == 6:
        aux = ("are", "VBP") if plural else ("is", "VBZ")
        toks = [("there", "EX"), aux] + subj + pp(rng)
    elif k == 7:
        v = verb(rng, True)
        toks = subj + pp(rng) + [(v[4], "VBG")] + obj_np(rng)
    elif k == 8:
        toks = subj + pp(rng)
    elif k == 9:
        v = verb(rng, False)
        toks = subj + [(v[4], "VBG")] + pp(rng) + pp(rng)
    elif k == 10:
        v = verb(rng)
        aux = ("are", "VBP") if plural else ("is", "VBZ")
        toks = subj + [aux, (v[3], "VBN")] + pp(rng)
    elif k == 11:
        v = verb(rng, True)
        toks = subj + [("that", "WDT"), (v[0] if plural else v[1], "VBP" if plural else "VBZ")] + det_np(rng)
    elif k == 12:
        v = verb(rng, False)
        toks = subj + [(v[4], "VBG"), (rng.choice(PARTICLES), "RP")] + pp(rng)
    else:
        v = verb(rng, True)
        toks = [("close", "RB"), ("up", "RB"), ("of", "IN")] + subj + [(v[4], "VBG")] + det_np(rng)
    return maybe_period(rng, toks, 0.4)


def subject(rng):
    if rng.random() < 0.6:
        return [(rng.choice(SUBJ), "PRP")]
    return det_np(rng, plural=rng.random() < 0.2)


def narrative(rng):
    k = rng.randrange(20)
    s = subject(rng)
    third = s[-1][1] == "NN" or s[0][0] in ("he", "she", "it")
    v = verb(rng)
    if k == 0:
        toks = s + [(v[2], "VBD")] + pp(rng)
    elif k == 1:
        v = verb(rng, True)
        toks = s + [(v[2], "VBD")] + obj_np(rng) + ([(rng.choice(ADVS), "RB")] if rng.random() < 0.5 else [])
    elif k == 2:
        aux = ("was", "VBD") if third or s[0][0] == "i" else ("were", "VBD")
        toks = s + [aux, (v[4], "VBG")] + pp(rng)
    elif k == 3:
        toks = s + [(v[2], "VBD")] + [(rng.choice(ADVS), "RB")]
    elif k == 4:
        p = rng.choice(POSS)
        n = rng.choice(NOUNS)[0]
        toks = [(p, "PRP$"), (n, "NN"), (v[2], "VBD")] + pp(rng)
    elif k == 5:
        if third:
            toks = s + [(v[1], "VBZ")]
        else:
            toks = s + [(v[0], "VBP")]
        if v[5] and rng.random() < 0.6:
            toks += det_np(rng) if rng.random() < 0.6 else [(rng.choice(OBJ), "PRP")]
    elif k == 6:
        toks = s + [(rng.choice(MODALS), "MD"), (v[0], "VB")]
        if v[5]:
            toks += det_np(rng)
    elif k == 7:
        aux = ("had", "VBD")
        toks = s + [aux, (v[3], "VBN")] + (det_np(rng) if v[5] else pp(rng))
    elif k == 8:
        v2 = verb(rng, False)
        toks = s + [(v[2], "VBD"), (rng.choice(OBJ), "PRP")] + pp(rng) + [(",", ","), ("and", "CC"),
                                                                            (rng.choice(SUBJ), "PRP"), (v2[2], "VBD")]
    elif k == 9:
        v1 = verb(rng, True)
        v2 = verb(rng, False)
        toks = s + [(v1[2], "VBD")] + det_np(rng) + [(v2[4], "VBG")] + pp(rng)
    elif k == 10:
        toks = [(rng.choice(ADVS), "RB"), (",", ",")] + s + [(v[2], "VBD")]
    elif k == 11:
        w = rng.choice(["wanted", "tried", "needed", "hoped", "began", "started"])
        toks = s + [(w, "VBD"), ("to", "TO"), (v[0], "VB")] + (det_np(rng) if v[5] else [])
    elif k == 12:
        toks = s + [(v[2], "VBD"), (rng.choice(PARTICLES), "RP")]
    elif k == 13:
        aux = rng.choice([("did", "VBD"), ("do", "VBP"), ("does", "VBZ")])
        toks = s + [aux, ("n't", "RB"), (v[0], "VB")]
    elif k == 14:
        aux = ("was", "VBD") if third or s[0][0] == "i" else ("were", "VBD")
        toks = s + [aux, (rng.choice(ADJS), "JJ")]
    elif k == 15:
        n = rng.choice(NOUNS)
        v = verb(rng, True)
        toks = s + [(v[2], "VBD"), ("the", "DT"), (n[0], "NN"), ("'s", "POS"), (rng.choice(NOUNS)[0], "NN")]
    elif k == 16:
        aux = ("is", "VBZ") if third else ("am", "VBP") if s[0][0] == "i" else ("are", "VBP")
        toks = s + [aux, (v[4], "VBG")] + (det_np(rng) if v[5] else pp(rng))
    elif k == 17:
        toks = s + [(v[2], "VBD")] + pp(rng) + [("and", "CC"), (verb(rng)[2], "VBD")] + pp(rng)
    elif k == 18:
        aux = ("has", "VBZ") if third else ("have", "VBP")
        toks = s + [aux, (v[3], "VBN")] + (det_np(rng) if v[5] else pp(rng))
    else:
        c = rng.choice(COMPARATIVES)
        toks = s + [("was", "VBD") if third else ("were", "VBD"), c, ("than", "IN")] + det_np(rng)
    return maybe_period(rng, toks, 0.8)


# Short forms that the templates do not reach.
FIXED = [
    "the/DT rock/NN", "they/PRP rock/VBP", "we/PRP rock/VBP", "you/PRP rock/VBP", "a/DT rock/NN",
    "the/DT park/NN", "they/PRP park/VBP", "the/DT watch/NN", "i/PRP watch/VBP", "a/DT walk/NN",
    "we/PRP walk/VBP", "the/DT ride/NN", "they/PRP ride/VBP", "a/DT smile/NN", "they/PRP smile/VBP",
    "the/DT dress/NN", "they/PRP dress/VBP", "the/DT play/NN", "we/PRP play/VBP", "the/DT swing/NN",
    "they/PRP swing/VBP", "a/DT kiss/NN", "we/PRP kiss/VBP", "the/DT light/NN", "they/PRP light/VBP",
    "yes/UH ,/, it/PRP rocks/VBZ ./.", "oh/UH ,/, i/PRP see/VBP ./.", "wow/UH ./.",
    "it/PRP 's/VBZ a/DT dog/NN ./.", "she/PRP 's/VBZ running/VBG ./.", "he/PRP 'll/MD come/VB ./.",
    "we/PRP 're/VBP here/RB ./.", "i/PRP 've/VBP seen/VBN it/PRP ./.", "i/PRP 'm/VBP here/RB ./.",
    "you/PRP 'd/MD know/VB ./.", "the/DT dog/NN 's/POS ball/NN", "what/WP a/DT day/NN ./.",
    "where/WRB is/VBZ the/DT dog/NN", "who/WP was/VBD there/RB", "how/WRB it/PRP shines/VBZ",
    "which/WDT dog/NN ran/VBD", "all/PDT the/DT dogs/NNS ran/VBD", "both/DT dogs/NNS sat/VBD",
    "to/TO the/DT sea/NN ./.", "not/RB now/RB ./.", "a/DT man/NN ,/, a/DT dog/NN ,/, and/CC a/DT cat/NN",
]


def write_forms(path):
    rows = set()
    for s, p in NOUNS + [(c[2], c[3]) for c in COMPOUNDS]:
        rows.add((s, "NOUN", s))
        rows.add((p, "NOUN", s))
    lemmas_of = {}
    for v in VERBS:
        for form, tag in zip(v[:5], ("VB", "VBZ", "VBD", "VBN", "VBG")):
            rows.add((form, tag, v[0]))
            lemmas_of.setdefault(form, set()).add(v[0])
    for form, lemmas in lemmas_of.items():
        if len(lemmas) == 1:
            rows.add((form, "VERB", next(iter(lemmas))))
    irregular_be = [("is", "be"), ("are", "be"), ("am", "be"), ("was", "be"), ("were", "be"), ("been", "be"),
                    ("being", "be"), ("'s", "be"), ("'re", "be"), ("'m", "be"), ("has", "have"), ("had", "have"),
                    ("having", "have"), ("'ve", "have"), ("does", "do"), ("did", "do"), ("done", "do"),
                    ("doing", "do"), ("'ll", "will"), ("'d", "would"), ("began", "begin"), ("begun", "begin"),
                    ("hoped", "hope"), ("started", "start")]
    for f, l in irregular_be:
        rows.add((f, "VERB", l))
    with open(path, "w") as out:
        out.write("# form<TAB>tag or class<TAB>lemma; generated by tools/make_tagger_corpus.py\n")
        for r in sorted(rows):
            out.write("\t".join(r) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--captions", type=int, default=6000)
    ap.add_argument("--narrative", type=int, default=6000)
    ap.add_argument("--forms", help="also write the inflection table to this path")
    args = ap.parse_args()
    if args.forms:
        write_forms(args.forms)
    rng = random.Random(args.seed)
    lines = []
    for _ in range(args.captions):
        lines.append(caption(rng))
    for _ in range(args.narrative):
        lines.append(narrative(rng))
    print("# generated by tools/make_tagger_corpus.py")
    for toks in lines:
        print(" ".join(f"{w}/{t}" for w, t in toks))
    for _ in range(20):
        for f in FIXED:
            print(f)


if __name__ == "__main__":
    main()
