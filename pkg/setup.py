from setuptools import setup, find_packages

setup(
    name="subdfo",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    package_data={"subdfo": ["problems/*.yml"]},
    description="Iterated-subspace derivative-free optimization with a benchmark harness",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    install_requires=[
        "numpy",
        "pydantic>=2",
        "PyYAML",
    ],
    extras_require={
        "tests": ["pytest", "hypothesis"],
    },
    entry_points={
        "console_scripts": ["subdfo=subdfo.cli:cli"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.8",
)
