import os

from setuptools import find_packages, setup

from pirtradeoff import __version__

CURRENT_DIR = os.path.abspath(os.path.dirname(__file__))

with open(os.path.join(CURRENT_DIR, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="pirtradeoff",
    version=__version__,
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    license="MIT",
    description=(
        "Storage-retrieval tradeoff workbench for private information retrieval "
        "from two databases holding two messages"
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    install_requires=[
        "jax>=0.3.16",
        "jaxlib>=0.3.15",
        "flax>=0.6",
        "chex>=0.1.4",
        "hydra-core>=1.1.1",
        "numpy>=1.22.3",
        "scipy>=1.8.0",
        "typing-extensions>=4.3.0",
    ],
    dependency_links=[
        "https://storage.googleapis.com/jax-releases/jax_releases.html",
    ],
    keywords=["Private Information Retrieval", "Information Theory", "JAX"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Information Analysis",
    ],
)
