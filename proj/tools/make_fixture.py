#!/usr/bin/env python3
"""Generate the end-to-end fixture corpus under tests/fixtures/e2e.

Output is deterministic for a given --seed. Files:
  wiki.jsonl          pages {"id","title","text","links"} with <math> spans
  paper_corpus.jsonl  dated papers {"title","year","text"} for birth times
  papers.jsonl        reading papers {"id","title","abstract","keywords","weekly_topics","cites"}
  oers.jsonl          resources {"id","type","title","description","related"}
  requests.jsonl      logged queries {"request_id","query":{...}}
  judgments.jsonl     ratings {"request_id","oer_id","rating","timestamp"}
"""

import argparse
import json
import random
from pathlib import Path
import re

TOPICS = {
    "probability": {
        "vocab": "probability event conditional bayes prior posterior likelihood random variable "
                 "expectation independence distribution outcome sample space evidence".split(),
        "keywords": ["bayes theorem", "conditional probability", "random variable", "expectation",
                     "independence"],
        "formulas": [
            r"P($a|$b)=\frac{P($b|$a)P($a)}{P($b)}",
            r"P($a|$b)=\frac{P($a\cap $b)}{P($b)}",
            r"E[$x]=\sum_{$i=1}^{$n}$x_{$i}p_{$i}",
            r"P($a\cup $b)=P($a)+P($b)-P($a\cap $b)",
            r"P($a\cap $b)=P($a)P($b|$a)",
        ],
    },
    "linear algebra": {
        "vocab": "matrix vector eigenvalue eigenvector determinant transpose trace linear map basis "
                 "rank orthogonal span subspace decomposition".split(),
        "keywords": ["eigenvalue", "determinant", "matrix transpose", "linear map", "orthogonal basis"],
        "formulas": [
            r"\det($a $b)=\det($a)\det($b)",
            r"($a $b)^{T}=$b^{T}$a^{T}",
            r"$a $x=\lambda $x+0\cdot $y",
            r"\mathrm{tr}($a+$b)=\mathrm{tr}($a)+\mathrm{tr}($b)",
            r"$x^{T}$a $x\geq $c^{2}-$c\cdot $c",
        ],
    },
    "calculus": {
        "vocab": "derivative integral limit continuity function slope area fundamental theorem "
                 "series convergence differentiable antiderivative tangent".split(),
        "keywords": ["derivative", "integral", "limit", "taylor series", "fundamental theorem"],
        "formulas": [
            r"\int_{$a}^{$b}$f($x)d$x=F($b)-F($a)",
            r"\lim_{$h\to 0}\frac{$f($x+$h)-$f($x)}{$h}",
            r"e^{$x}=\sum_{$n=0}^{\infty}\frac{$x^{$n}}{$n !}",
            r"\frac{d}{d$x}($f($x)$g($x))=$f($x)\frac{d$g}{d$x}+$g($x)\frac{d$f}{d$x}",
            r"$f($x)\approx $f($a)+\frac{d$f}{d$x}($x-$a)",
        ],
    },
    "information theory": {
        "vocab": "entropy information channel capacity code bits mutual divergence source "
                 "compression noise message uncertainty".split(),
        "keywords": ["entropy", "mutual information", "channel capacity", "kullback leibler divergence",
                     "source coding"],
        "formulas": [
            r"H($x)=-\sum_{$i=1}^{$n}p_{$i}\log p_{$i}",
            r"I($x,$y)=H($x)-H($x|$y)",
            r"D(p,q)=\sum_{$x}p($x)\log\frac{p($x)}{q($x)}",
            r"C=\max_{p($x)}I($x,$y)+0\cdot $n",
            r"H($x,$y)=H($x)+H($y|$x)",
        ],
    },
    "machine learning": {
        "vocab": "learning model training loss gradient regression classifier weights feature "
                 "prediction overfitting regularization neural network".split(),
        "keywords": ["gradient descent", "linear regression", "loss function", "regularization",
                     "logistic regression"],
        "formulas": [
            r"$w_{$t+1}=$w_{$t}-\eta\nabla L($w_{$t})",
            r"L($w)=\frac{1}{$n}\sum_{$i=1}^{$n}($y_{$i}-$w^{T}$x_{$i})^{2}",
            r"\sigma($z)=\frac{1}{1+e^{-$z}}",
            r"L($w)=\sum_{$i=1}^{$n}($y_{$i}-$w^{T}$x_{$i})^{2}+\lambda $w^{T}$w",
            r"\hat{$y}=\sigma($w^{T}$x+$b)",
        ],
    },
    "graph theory": {
        "vocab": "graph vertex edge path degree tree cycle adjacency walk connected component "
                 "shortest distance network".split(),
        "keywords": ["adjacency matrix", "shortest path", "random walk", "vertex degree", "spanning tree"],
        "formulas": [
            r"\sum_{$v\in V}\deg($v)=2|E|+0\cdot $n",
            r"P_{$i $j}=\frac{A_{$i $j}}{\deg($i)}",
            r"d($u,$v)\leq d($u,$w)+d($w,$v)",
            r"|E|=|V|-1+0\cdot $c $n",
            r"$r_{$i}=\frac{1-$d}{$n}+$d\sum_{$j}\frac{$r_{$j}}{\deg($j)}",
        ],
    },
    "statistics": {
        "vocab": "mean variance estimator sample population hypothesis test confidence interval "
                 "deviation bias regression correlation normal".split(),
        "keywords": ["sample mean", "variance", "confidence interval", "hypothesis test", "correlation"],
        "formulas": [
            r"\bar{$x}=\frac{1}{$n}\sum_{$i=1}^{$n}$x_{$i}",
            r"s^{2}=\frac{1}{$n-1}\sum_{$i=1}^{$n}($x_{$i}-\bar{$x})^{2}",
            r"$z=\frac{\bar{$x}-\mu}{\sigma/\sqrt{$n}}",
            r"\rho_{$x $y}=\frac{\mathrm{cov}($x,$y)}{\sigma_{$x}\sigma_{$y}}",
            r"\bar{$x}\pm $z\frac{s}{\sqrt{$n}}",
        ],
    },
    "optimization": {
        "vocab": "optimization objective constraint convex minimum maximum lagrange multiplier "
                 "feasible gradient dual primal solver".split(),
        "keywords": ["convex function", "lagrange multiplier", "gradient descent", "duality",
                     "constrained optimization"],
        "formulas": [
            r"\mathcal{L}($x,\lambda)=$f($x)+\lambda $g($x)",
            r"$f(\theta $x+(1-\theta)$y)\leq\theta $f($x)+(1-\theta)$f($y)",
            r"\nabla $f($x)+\lambda\nabla $g($x)=0\cdot $n",
            r"$x_{$k+1}=$x_{$k}-\alpha\nabla $f($x_{$k})",
            r"\min_{$x}$f($x)+\frac{\rho}{2}($a $x-$b)^{2}",
        ],
    },
    "signal processing": {
        "vocab": "signal frequency fourier transform filter sampling convolution spectrum noise "
                 "impulse response amplitude phase".split(),
        "keywords": ["fourier transform", "convolution", "sampling theorem", "impulse response", "spectrum"],
        "formulas": [
            r"X($k)=\sum_{$n=0}^{$m-1}$x_{$n}e^{-2\pi i $k $n/$m}",
            r"($f*$g)($t)=\int_{-\infty}^{\infty}$f(\tau)$g($t-\tau)d\tau",
            r"$y_{$n}=\sum_{$k=0}^{$m}$h_{$k}$x_{$n-$k}",
            r"X($f)=\int_{-\infty}^{\infty}$x($t)e^{-2\pi i $f $t}d$t",
            r"$f_{s}\geq 2$f_{max}+0\cdot $n",
        ],
    },
    "number theory": {
        "vocab": "prime integer divisor modular congruence gcd factorization residue euler "
                 "fermat arithmetic remainder theorem".split(),
        "keywords": ["prime number", "modular arithmetic", "greatest common divisor", "fermat theorem",
                     "euler function"],
        "formulas": [
            r"$a^{$p-1}\equiv 1\pmod{$p}",
            r"\gcd($a,$b)=\gcd($b,$a-$b\lfloor $a/$b\rfloor)",
            r"\varphi($n)=$n\prod_{$p|$n}(1-\frac{1}{$p})",
            r"$a\cdot $x+$b\cdot $y=\gcd($a,$b)",
            r"$a^{\varphi($n)}\equiv 1+0\cdot $b\pmod{$n}",
        ],
    },
}

FILLER = ("the of and in to is a for that with as by this which on are it an be we can "
          "from at or also its these such".split())
VARIABLE_POOLS = {
    "a": list("ABCMQ"), "b": list("BDKNR"), "c": list("cku"), "x": list("xzs"), "y": list("yvq"),
    "n": list("nNm"), "i": list("ikl"), "j": list("jl"), "f": list("fgh"), "g": list("gh"),
    "h": list("hd"), "p": list("pq"), "t": list("tk"), "w": list("w"), "z": list("zu"),
    "u": list("u"), "v": list("v"), "k": list("kr"), "d": list("d"), "m": list("mM"),
    "r": list("r"),
}
TYPES = ["video", "slides", "code", "wiki"]


def variables(rng, template, canonical=False):
    mapping = {}
    for name in VARIABLE_POOLS:
        mapping[name] = name if canonical else rng.choice(VARIABLE_POOLS[name])
    return re.sub(r"\$([a-z])", lambda m: mapping[m.group(1)], template)


def vary(rng, latex):
    roll = rng.random()
    if roll < 0.2:
        return latex + "+0"
    if roll < 0.3:
        return r"\frac{1}{2}(" + latex.replace("=", ")=", 1) if "=" in latex else latex
    return latex


def sentence(rng, vocab, words=14):
    out = []
    for _ in range(words):
        out.append(rng.choice(vocab) if rng.random() < 0.55 else rng.choice(FILLER))
    return " ".join(out).capitalize() + "."


def paragraph(rng, vocab, sentences=3):
    return " ".join(sentence(rng, vocab) for _ in range(sentences))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests/fixtures/e2e")
    parser.add_argument("--seed", type=int, default=20240501)
    parser.add_argument("--pages-per-topic", type=int, default=5)
    parser.add_argument("--oers-per-topic", type=int, default=10)
    parser.add_argument("--requests", type=int, default=40)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    topics = list(TOPICS)
    pages, titles = [], {}
    for t_index, topic in enumerate(topics):
        spec = TOPICS[topic]
        for p in range(args.pages_per_topic):
            page_id = f"w{t_index:02d}{p:02d}"
            title = (spec["keywords"][p % len(spec["keywords"])] if p < len(spec["keywords"])
                     else f"{topic} topic {p}")
            titles[page_id] = title
            pages.append({"id": page_id, "topic": topic, "title": title})

    wiki = []
    for page in pages:
        spec = TOPICS[page["topic"]]
        body = [paragraph(rng, spec["vocab"] + page["title"].split())]
        templates = list(spec["formulas"])
        rng.shuffle(templates)
        count = rng.choice([4, 4, 5])
        for i in range(count):
            template = templates[i % len(templates)]
            latex = vary(rng, variables(rng, template, canonical=rng.random() < 0.5))
            body.append(f"<math>{latex}</math>")
            body.append(paragraph(rng, spec["vocab"], 2))
        # Spans that the filter or the parser rejects.
        if rng.random() < 0.5:
            body.append("<math>x=1</math> " + sentence(rng, spec["vocab"]))
        if rng.random() < 0.2:
            body.append(r"<math>\frac{1}</math> " + sentence(rng, spec["vocab"]))
        same_topic = [q["id"] for q in pages if q["topic"] == page["topic"] and q["id"] != page["id"]]
        other = [q["id"] for q in pages if q["topic"] != page["topic"]]
        links = rng.sample(same_topic, 2) + rng.sample(other, 1)
        wiki.append({"id": page["id"], "title": page["title"], "text": " ".join(body), "links": sorted(links)})

    paper_corpus = []
    for page in pages:
        if rng.random() < 0.2:
            continue
        for _ in range(rng.randint(1, 3)):
            vocab = TOPICS[page["topic"]]["vocab"]
            text = f"{sentence(rng, vocab)} We study {page['title']} in detail. {sentence(rng, vocab)}"
            paper_corpus.append({"title": f"On {page['topic']}", "year": rng.randint(1890, 2015), "text": text})

    papers = []
    for t_index, topic in enumerate(topics):
        spec = TOPICS[topic]
        for p in range(3):
            pid = f"p{t_index:02d}{p}"
            keywords = rng.sample(spec["keywords"], 3)
            cites = [x["id"] for x in papers if rng.random() < 0.08]
            cites += [f"p{t_index:02d}{q}" for q in range(p)]
            papers.append({
                "id": pid,
                "title": f"Notes on {keywords[0]}",
                "abstract": paragraph(rng, spec["vocab"] + " ".join(keywords).split(), 3),
                "keywords": keywords,
                "weekly_topics": [f"week {t_index + 1} {topic}"],
                "cites": sorted(set(cites)),
            })

    oers = []
    for t_index, topic in enumerate(topics):
        spec = TOPICS[topic]
        ids = [f"r{t_index:02d}{o:02d}" for o in range(args.oers_per_topic)]
        for o, oid in enumerate(ids):
            kind = TYPES[(t_index + o) % len(TYPES)]
            keyword = spec["keywords"][o % len(spec["keywords"])]
            related = sorted(rng.sample([x for x in ids if x != oid], 2))
            oers.append({
                "id": oid,
                "type": kind,
                "title": f"{keyword.title()} ({kind})",
                "description": f"{keyword} {paragraph(rng, spec['vocab'], 2)}",
                "related": related,
            })

    requests, judgments = [], []
    for r in range(args.requests):
        t_index = r % len(topics)
        topic = topics[t_index]
        spec = TOPICS[topic]
        paper = rng.choice([p for p in papers if p["id"].startswith(f"p{t_index:02d}")])
        query = {
            "latex": variables(rng, rng.choice(spec["formulas"])),
            "context": paragraph(rng, spec["vocab"], 2),
            "abstract": paper["abstract"],
            "keywords": paper["keywords"],
            "topics": paper["weekly_topics"],
        }
        if rng.random() < 0.3:
            query["question"] = f"How does {rng.choice(spec['keywords'])} relate to this formula?"
        request_id = f"req{r:03d}"
        requests.append({"request_id": request_id, "query": query})
        on_topic = [o["id"] for o in oers if o["id"].startswith(f"r{t_index:02d}")]
        off_topic = [o["id"] for o in oers if not o["id"].startswith(f"r{t_index:02d}")]
        judged = [(oid, "Good" if rng.random() < 0.6 else "OK") for oid in rng.sample(on_topic, 4)]
        judged += [(oid, "OK" if rng.random() < 0.1 else "Bad") for oid in rng.sample(off_topic, 6)]
        rng.shuffle(judged)
        for n, (oid, rating) in enumerate(judged):
            judgments.append({"request_id": request_id, "oer_id": oid, "rating": rating,
                              "timestamp": f"2024-05-{1 + r % 28:02d}T10:{n:02d}:00Z"})

    def dump(name, records):
        with open(args.out / name, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")

    dump("wiki.jsonl", wiki)
    dump("paper_corpus.jsonl", paper_corpus)
    dump("papers.jsonl", papers)
    dump("oers.jsonl", oers)
    dump("requests.jsonl", requests)
    dump("judgments.jsonl", judgments)
    print(f"pages {len(wiki)}, papers {len(papers)}, dated papers {len(paper_corpus)}, "
          f"resources {len(oers)}, requests {len(requests)}, judgments {len(judgments)}")


if __name__ == "__main__":
    main()
