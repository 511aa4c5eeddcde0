"""textlab: a collaborative text-classification teaching platform.

Teachers organize students into groups and projects over labeled corpora;
students hand-label documents, define wildcard word features, train and
evaluate Naive Bayes and logistic-regression classifiers, and inspect
label/word statistics through an HTTP API, a web UI, and an admin CLI.
"""

__version__ = "0.1.0"
