//! Companion matplotlib scripts. They are written next to the CSV and never run.

use std::path::Path;

fn header(csv: &Path) -> String {
    let name = csv.file_name().map_or_else(|| csv.display().to_string(), |n| n.to_string_lossy().into_owned());
    format!(
        "import os\n\
         import numpy as np\n\
         import matplotlib.pyplot as plt\n\
         \n\
         HERE = os.path.dirname(os.path.abspath(__file__))\n\
         CSV = os.path.join(HERE, {name:?})\n\
         with open(CSV) as fh:\n\
         \x20   skip = sum(1 for line in fh if line.startswith(\"#\"))\n\
         data = np.genfromtxt(CSV, delimiter=\",\", skip_header=skip, names=True)\n\
         \n"
    )
}

fn footer(csv: &Path) -> String {
    let stem = csv.file_stem().map_or_else(|| "plot".into(), |s| s.to_string_lossy().into_owned());
    format!("plt.tight_layout()\nplt.savefig(os.path.join(HERE, {:?}))\n", format!("{stem}.png"))
}

pub fn lightcone(csv: &Path) -> String {
    header(csv)
        + "n = int(round(np.sqrt(len(data))))\n\
           x1 = data[\"X1\"].reshape(n, n)\n\
           x2 = data[\"X2\"].reshape(n, n)\n\
           fig = plt.figure()\n\
           ax = fig.add_subplot(projection=\"3d\")\n\
           for column in (\"X0_future\", \"X0_past\"):\n\
           \x20   ax.plot_surface(x1, x2, np.ma.masked_invalid(data[column].reshape(n, n)), alpha=0.6)\n\
           ax.set_xlabel(\"X1\")\n\
           ax.set_ylabel(\"X2\")\n\
           ax.set_zlabel(\"X0\")\n"
        + &footer(csv)
}

pub fn beta(csv: &Path, coordinate: &str) -> String {
    header(csv)
        + &format!(
            "plt.plot(data[{coordinate:?}], data[\"beta\"])\n\
             plt.xlabel({coordinate:?})\n\
             plt.ylabel(\"beta\")\n"
        )
        + &footer(csv)
}

pub fn friedman(csv: &Path) -> String {
    header(csv)
        + "plt.plot(data[\"T\"], data[\"A\"], label=\"A(T)\")\n\
           plt.plot(data[\"T\"], data[\"a_classical\"], \"--\", label=\"(t/t0)^(2/3)\")\n\
           plt.xlabel(\"T\")\n\
           plt.legend()\n"
        + &footer(csv)
}
