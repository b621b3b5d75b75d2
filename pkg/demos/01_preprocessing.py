"""Walk through the four text-preprocessing stages on real-looking summaries.

Each stage is a pure function, so you can inspect every intermediate step.
"""

from bugtriage.preprocess import bundled_stopwords, normalize_case, preprocess, remove_stopwords, tokenize
from bugtriage.porter import stem

SUMMARIES = [
    "Regression in JMeter 5.0 due to fix of Bug 62478",
    "logical structures table should sort on name",
    "Kernel module dvb-tpci does not find its firmware",
    "Copy XML doesn't work on #document nodes",
]

stopwords = bundled_stopwords()
print(f"bundled stopword list: {stopwords.source} ({len(stopwords.words)} words)\n")

for text in SUMMARIES:
    lowered = normalize_case(text)
    tokens = tokenize(lowered)
    kept = remove_stopwords(tokens, stopwords)
    stems = [stem(t) for t in kept]
    print(f"raw       : {text}")
    print(f"lowercase : {lowered}")
    print(f"tokens    : {tokens}")
    print(f"no stops  : {kept}")
    print(f"stems     : {stems}")
    print(f"pipeline  : {preprocess(text)}")
    print()
